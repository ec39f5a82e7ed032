//! Truncated power series in noncommuting letters `X1..Xr` and `Ȳ1..Ȳt`.
//!
//! The only relation imposed is that every `X` letter commutes with every
//! `Ȳ` letter, so each monomial has a unique canonical form: the `X` block
//! followed by the `Ȳ` block, each block keeping its internal order.
//!
//! Two representations live here. [`FreeSeries`] is the public, sparse one
//! (a sorted map from canonical words to coefficients). [`Basis`] enumerates
//! every canonical word of a fixed alphabet up to a fixed degree and lets the
//! hot loops in the Eisenstein sums work on plain coefficient vectors.

use crate::error::{NcmsError, Result};
use crate::scalar::Real;
use num_complex::Complex;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// `X_i`, 1-based.
    X(u16),
    /// `Ȳ_j`, 1-based.
    Ybar(u16),
}

impl Letter {
    pub fn is_x(self) -> bool {
        matches!(self, Letter::X(_))
    }

    pub fn index(self) -> usize {
        match self {
            Letter::X(i) | Letter::Ybar(i) => i as usize,
        }
    }

    fn check(self, x: usize, y: usize) -> Result<()> {
        let (i, bound) = match self {
            Letter::X(i) => (i as usize, x),
            Letter::Ybar(i) => (i as usize, y),
        };
        if i == 0 || i > bound {
            return Err(NcmsError::InvalidLetter(format!("{self} (alphabet x={x}, y={y})")));
        }
        Ok(())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X(i) => write!(f, "X{i}"),
            Letter::Ybar(i) => write!(f, "Y{i}"),
        }
    }
}

/// A monomial. Words held by a [`FreeSeries`] are always canonical.
///
/// Ordering is by degree first, then lexicographic on letters, which is the
/// order terms are serialized in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Canonical word from an arbitrary letter sequence; each index must lie
    /// in the alphabet `(x, y)`.
    pub fn canonicalize(letters: &[Letter], x: usize, y: usize) -> Result<Self> {
        for l in letters {
            l.check(x, y)?;
        }
        Ok(Self::canonical_unchecked(letters.iter().copied()))
    }

    fn canonical_unchecked(letters: impl Iterator<Item = Letter> + Clone) -> Self {
        let mut out: Vec<Letter> = letters.clone().filter(|l| l.is_x()).collect();
        out.extend(letters.filter(|l| !l.is_x()));
        Word { letters: out }
    }

    /// `X_{i1}..X_{in}` from 1-based indices.
    pub fn xs(indices: &[usize]) -> Self {
        Word { letters: indices.iter().map(|&i| Letter::X(i as u16)).collect() }
    }

    /// `Ȳ_{j1}..Ȳ_{jn}` from 1-based indices.
    pub fn ys(indices: &[usize]) -> Self {
        Word { letters: indices.iter().map(|&i| Letter::Ybar(i as u16)).collect() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn is_canonical(&self) -> bool {
        !self.letters.windows(2).any(|w| !w[0].is_x() && w[1].is_x())
    }

    /// Canonical form of the concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        Self::canonical_unchecked(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn x_part(&self) -> Vec<usize> {
        self.letters.iter().filter(|l| l.is_x()).map(|l| l.index()).collect()
    }

    pub fn y_part(&self) -> Vec<usize> {
        self.letters.iter().filter(|l| !l.is_x()).map(|l| l.index()).collect()
    }

    /// Dotted notation, e.g. `X1.X3.Y2`; the empty word is `1`.
    pub fn dotted(&self) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(".")
    }

    pub fn parse_dotted(s: &str, x: usize, y: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for tok in s.split('.') {
            let bad = || NcmsError::InvalidLetter(tok.to_string());
            let (head, idx) = tok.split_at(1);
            let i: u16 = idx.parse().map_err(|_| bad())?;
            letters.push(match head {
                "X" => Letter::X(i),
                "Y" => Letter::Ybar(i),
                _ => return Err(bad()),
            });
        }
        Word::canonicalize(&letters, x, y)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dotted())
    }
}

/// Worst-coefficient report from [`FreeSeries::approx_eq`].
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    pub equal: bool,
    pub max_deviation: f64,
    pub worst: Option<Word>,
}

/// Element of `ℂ⟪X1..Xr, Ȳ1..Ȳt⟫` truncated at total degree `max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeSeries<T: Real> {
    x: usize,
    y: usize,
    max_degree: usize,
    terms: BTreeMap<Word, Complex<T>>,
}

impl<T: Real> FreeSeries<T> {
    pub fn zero(x: usize, y: usize, max_degree: usize) -> Self {
        FreeSeries { x, y, max_degree, terms: BTreeMap::new() }
    }

    pub fn one(x: usize, y: usize, max_degree: usize) -> Self {
        let mut s = Self::zero(x, y, max_degree);
        s.terms.insert(Word::empty(), Complex::new(T::one(), T::zero()));
        s
    }

    pub fn alphabet(&self) -> (usize, usize) {
        (self.x, self.y)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Complex<T> {
        self.terms.get(w).copied().unwrap_or_else(Complex::default)
    }

    pub fn constant(&self) -> Complex<T> {
        self.coeff(&Word::empty())
    }

    /// Sets a coefficient. The word is canonicalized and checked against the
    /// alphabet; words above the truncation degree are dropped.
    pub fn set(&mut self, w: &Word, c: Complex<T>) -> Result<()> {
        let w = Word::canonicalize(w.letters(), self.x, self.y)?;
        if w.degree() <= self.max_degree {
            if c == Complex::default() {
                self.terms.remove(&w);
            } else {
                self.terms.insert(w, c);
            }
        }
        Ok(())
    }

    fn same_alphabet(&self, other: &Self) -> Result<()> {
        if (self.x, self.y) != (other.x, other.y) {
            return Err(NcmsError::AlphabetMismatch(self.x, self.y, other.x, other.y));
        }
        Ok(())
    }

    /// Concatenation product truncated at `degree` (which may not exceed
    /// either factor's truncation).
    pub fn mul(&self, other: &Self, degree: usize) -> Result<Self> {
        self.same_alphabet(other)?;
        let degree = degree.min(self.max_degree).min(other.max_degree);
        let mut out = Self::zero(self.x, self.y, degree);
        for (u, a) in &self.terms {
            if u.degree() > degree {
                continue;
            }
            for (v, b) in &other.terms {
                if u.degree() + v.degree() > degree {
                    continue;
                }
                let entry = out.terms.entry(u.concat(v)).or_default();
                *entry = *entry + a * b;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_alphabet(other)?;
        let mut out = self.clone();
        out.max_degree = self.max_degree.min(other.max_degree);
        out.terms.retain(|w, _| w.degree() <= out.max_degree);
        for (w, c) in &other.terms {
            if w.degree() <= out.max_degree {
                let e = out.terms.entry(w.clone()).or_default();
                *e = *e + c;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = *c * k;
        }
        out
    }

    /// Inverse in the group of series with constant term 1, by the degree
    /// recursion `B_d = -Σ_{e<d} (A-1)_{d-e} B_e`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant();
        let tol = T::lit(1e-12);
        if (c0 - Complex::new(T::one(), T::zero())).norm() > tol {
            return Err(NcmsError::NotInvertible(format!("{c0}")));
        }
        let d = self.max_degree;
        // homogeneous parts of A - 1
        let mut parts: Vec<Vec<(&Word, Complex<T>)>> = vec![Vec::new(); d + 1];
        for (w, c) in &self.terms {
            if w.degree() > 0 {
                parts[w.degree()].push((w, *c));
            }
        }
        let mut inv: Vec<BTreeMap<Word, Complex<T>>> = vec![BTreeMap::new(); d + 1];
        inv[0].insert(Word::empty(), Complex::new(T::one(), T::zero()));
        for deg in 1..=d {
            let mut acc: BTreeMap<Word, Complex<T>> = BTreeMap::new();
            for e in 0..deg {
                for (u, a) in &parts[deg - e] {
                    for (v, b) in &inv[e] {
                        let entry = acc.entry(u.concat(v)).or_default();
                        *entry = *entry - a * b;
                    }
                }
            }
            inv[deg] = acc;
        }
        let mut out = Self::zero(self.x, self.y, d);
        for part in inv {
            out.terms.extend(part);
        }
        Ok(out)
    }

    /// Tolerance comparison over the union of supports.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> ApproxReport {
        let mut worst = None;
        let mut max_dev = 0.0;
        if (self.x, self.y) != (other.x, other.y) {
            return ApproxReport { equal: false, max_deviation: f64::INFINITY, worst: None };
        }
        for w in self.terms.keys().chain(other.terms.keys()) {
            let dev = (self.coeff(w) - other.coeff(w)).norm().to_f64_lossy();
            if dev > max_dev || (dev.is_nan() && worst.is_none()) {
                max_dev = dev;
                worst = Some(w.clone());
            }
        }
        ApproxReport { equal: max_dev <= tol, max_deviation: max_dev, worst }
    }

    /// Largest modulus among the nonconstant coefficients.
    pub fn max_nonconstant(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(w, _)| w.degree() > 0)
            .map(|(_, c)| c.norm().to_f64_lossy())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| json!({"word": w.dotted(), "re": c.re.to_f64_lossy(), "im": c.im.to_f64_lossy()}))
            .collect();
        json!({
            "alphabet": {"x": self.x, "y": self.y},
            "D": self.max_degree,
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| NcmsError::Parse(format!("series json: {m}"));
        let x = v["alphabet"]["x"].as_u64().ok_or_else(|| bad("alphabet.x"))? as usize;
        let y = v["alphabet"]["y"].as_u64().ok_or_else(|| bad("alphabet.y"))? as usize;
        let d = v["D"].as_u64().ok_or_else(|| bad("D"))? as usize;
        let mut s = Self::zero(x, y, d);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let w = Word::parse_dotted(t["word"].as_str().ok_or_else(|| bad("word"))?, x, y)?;
            let re = t["re"].as_f64().ok_or_else(|| bad("re"))?;
            let im = t["im"].as_f64().ok_or_else(|| bad("im"))?;
            s.set(&w, Complex::new(T::lit(re), T::lit(im)))?;
        }
        Ok(s)
    }
}

/// Every canonical word of an alphabet up to a degree, with a precomputed
/// multiplication table, for dense coefficient-vector arithmetic.
#[derive(Clone, Debug)]
pub struct Basis {
    x: usize,
    y: usize,
    degree: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// `(i, j, k)`: word i times word j is word k.
    table: Vec<(u32, u32, u32)>,
}

fn sequences(alphabet: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet);
        for s in &out {
            for i in 1..=alphabet {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

impl Basis {
    pub fn new(x: usize, y: usize, degree: usize) -> Self {
        let mut words = Vec::new();
        for total in 0..=degree {
            for dx in 0..=total {
                let dy = total - dx;
                if (dx > 0 && x == 0) || (dy > 0 && y == 0) {
                    continue;
                }
                for xs in sequences(x, dx) {
                    for ys in sequences(y, dy) {
                        let mut w = Word::xs(&xs);
                        w.letters.extend(ys.iter().map(|&j| Letter::Ybar(j as u16)));
                        words.push(w);
                    }
                }
            }
        }
        words.sort();
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut table = Vec::new();
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                if u.degree() + v.degree() <= degree {
                    table.push((i as u32, j as u32, index[&u.concat(v)] as u32));
                }
            }
        }
        Basis { x, y, degree, words, index, table }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn alphabet(&self) -> (usize, usize) {
        (self.x, self.y)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn one<T: Real>(&self) -> Vec<Complex<T>> {
        let mut v = vec![Complex::default(); self.len()];
        v[0] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn mul<T: Real>(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::default(); self.len()];
        for &(i, j, k) in &self.table {
            out[k as usize] = out[k as usize] + a[i as usize] * b[j as usize];
        }
        out
    }

    /// Inverse of a vector with constant term 1 (unchecked).
    pub fn inverse<T: Real>(&self, a: &[Complex<T>]) -> Vec<Complex<T>> {
        // B = Σ_k (1 - A)^k, exact after `degree` steps
        let mut n: Vec<Complex<T>> = a.iter().map(|c| -c).collect();
        n[0] = Complex::default();
        let mut b = self.one();
        for _ in 0..self.degree {
            let mut next = self.mul(&n, &b);
            next[0] = next[0] + Complex::new(T::one(), T::zero());
            b = next;
        }
        b
    }

    pub fn to_series<T: Real>(&self, v: &[Complex<T>]) -> FreeSeries<T> {
        let mut s = FreeSeries::zero(self.x, self.y, self.degree);
        for (w, c) in self.words.iter().zip(v) {
            if *c != Complex::default() {
                s.terms.insert(w.clone(), *c);
            }
        }
        s
    }

    pub fn from_series<T: Real>(&self, s: &FreeSeries<T>) -> Vec<Complex<T>> {
        let mut v = vec![Complex::default(); self.len()];
        for (w, c) in s.terms() {
            if let Some(i) = self.index_of(w) {
                v[i] = *c;
            }
        }
        v
    }
}
