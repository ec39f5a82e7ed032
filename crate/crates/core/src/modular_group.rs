//! Γ₀(N): integer matrices, Möbius action, cusps and scaling matrices,
//! coset enumeration for `Γ_𝔟\Γ`, and point reduction.
//!
//! Full cusp support (∞ and 0) is available for N = 1 and N prime; other
//! levels only expose the cusp at infinity.

use crate::error::{NcmsError, Result};
use crate::scalar::Real;
use num_complex::Complex;
use std::fmt;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    let (g, s, _) = ext_gcd(a.rem_euclid(n), n);
    (g == 1).then(|| s.rem_euclid(n))
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub fn euler_phi(n: i64) -> i64 {
    let mut n = n.abs();
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Integer matrix `(a b; c d)` of determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(NcmsError::NotUnimodular([a, b, c, d]));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub const fn identity() -> Self {
        GroupElement { a: 1, b: 0, c: 0, d: 1 }
    }

    /// `T = (1 1; 0 1)`.
    pub const fn translation(n: i64) -> Self {
        GroupElement { a: 1, b: n, c: 0, d: 1 }
    }

    /// `S = (0 -1; 1 0)`.
    pub const fn inversion() -> Self {
        GroupElement { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, o: &Self) -> Self {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        GroupElement { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        GroupElement { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    pub fn in_gamma0(&self, level: u32) -> bool {
        self.c % level as i64 == 0
    }

    /// `(az+b)/(cz+d)`.
    pub fn apply<T: Real>(&self, z: &UpperHalfPoint<T>) -> UpperHalfPoint<T> {
        let zc = z.to_complex();
        let (a, b, c, d) = (T::from_int(self.a), T::from_int(self.b), T::from_int(self.c), T::from_int(self.d));
        let num = zc * a + b;
        let den = zc * c + d;
        let w = num / den;
        // Im is computed from the closed form to keep it positive under cancellation
        UpperHalfPoint { x: w.re, y: z.y / den.norm_sqr() }
    }

    /// `cz + d`.
    pub fn automorphy<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        z * T::from_int(self.c) + T::from_int(self.d)
    }

    pub fn apply_cusp(&self, p: &Cusp) -> Cusp {
        Cusp::new(self.a * p.num + self.b * p.den, self.c * p.num + self.d * p.den)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// A point of `P¹(ℚ)` stored as `num/den` in lowest terms with `den ≥ 0`;
/// infinity is `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cusp {
    pub num: i64,
    pub den: i64,
}

impl Cusp {
    pub fn new(num: i64, den: i64) -> Self {
        if den == 0 {
            return Cusp::infinity();
        }
        let g = gcd(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Cusp { num: n, den: d }
    }

    pub const fn infinity() -> Self {
        Cusp { num: 1, den: 0 }
    }

    pub const fn zero() -> Self {
        Cusp { num: 0, den: 1 }
    }

    pub fn is_infinity(&self) -> bool {
        self.den == 0
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The inequivalent cusps the crate works with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CuspLabel {
    Infinity,
    Zero,
}

impl CuspLabel {
    pub fn value(self) -> Cusp {
        match self {
            CuspLabel::Infinity => Cusp::infinity(),
            CuspLabel::Zero => Cusp::zero(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CuspLabel::Infinity => "inf",
            CuspLabel::Zero => "0",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "i∞" => Ok(CuspLabel::Infinity),
            "0" | "zero" => Ok(CuspLabel::Zero),
            other => Err(NcmsError::UnsupportedCusp(other.to_string())),
        }
    }
}

/// `z = x + iy` with `y > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint<T: Real> {
    pub x: T,
    pub y: T,
}

impl<T: Real> UpperHalfPoint<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !(y > T::zero()) {
            return Err(NcmsError::NotInUpperHalfPlane(y.to_f64_lossy()));
        }
        Ok(UpperHalfPoint { x, y })
    }

    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn to_complex(&self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }
}

/// Real determinant-1 matrix attached to a cusp, mapping ∞ to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingMatrix<T: Real> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub cusp: CuspLabel,
}

impl<T: Real> ScalingMatrix<T> {
    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        ScalingMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a, cusp: self.cusp }
    }

    pub fn apply(&self, z: &UpperHalfPoint<T>) -> UpperHalfPoint<T> {
        let zc = z.to_complex();
        let den = zc * self.c + self.d;
        let w = (zc * self.a + self.b) / den;
        UpperHalfPoint { x: w.re, y: z.y / den.norm_sqr() }
    }

    pub fn apply_complex(&self, z: Complex<T>) -> Complex<T> {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn automorphy(&self, z: Complex<T>) -> Complex<T> {
        z * self.c + self.d
    }

    /// Image of ∞, as a real number (`None` when it is ∞ itself).
    pub fn image_of_infinity(&self) -> Option<T> {
        (self.c != T::zero()).then(|| self.a / self.c)
    }

    /// Conjugate `σ⁻¹ γ σ` of an integer matrix.
    pub fn conjugate(&self, g: &GroupElement) -> [T; 4] {
        let gi = [T::from_int(g.a), T::from_int(g.b), T::from_int(g.c), T::from_int(g.d)];
        let s = [self.a, self.b, self.c, self.d];
        let si = [self.d, -self.b, -self.c, self.a];
        mat_mul(&si, &mat_mul(&gi, &s))
    }
}

fn mat_mul<T: Real>(x: &[T; 4], y: &[T; 4]) -> [T; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Result of moving a point into a region of large height.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reduction {
    /// `δ ∈ Γ₀(N)`.
    pub element: GroupElement,
    /// Chart in which `δz` is high: `Im(σ⁻¹ δ z) = height`.
    pub chart: CuspLabel,
    pub height: f64,
}

/// Handle for Γ₀(N).
#[derive(Clone, Debug, PartialEq)]
pub struct Gamma0 {
    level: u32,
    cusps: Vec<CuspLabel>,
}

impl Gamma0 {
    pub fn new(level: i64) -> Result<Self> {
        if level <= 0 || level > u32::MAX as i64 {
            return Err(NcmsError::InvalidLevel(level));
        }
        let cusps = if is_prime(level) {
            vec![CuspLabel::Infinity, CuspLabel::Zero]
        } else {
            vec![CuspLabel::Infinity]
        };
        Ok(Gamma0 { level: level as u32, cusps })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    fn n(&self) -> i64 {
        self.level as i64
    }

    pub fn is_prime_level(&self) -> bool {
        is_prime(self.n())
    }

    /// Inequivalent cusps with full support (∞, and 0 at prime level).
    pub fn cusps(&self) -> &[CuspLabel] {
        &self.cusps
    }

    pub fn has_cusp(&self, c: CuspLabel) -> bool {
        self.cusps.contains(&c)
    }

    fn require(&self, c: CuspLabel) -> Result<()> {
        if self.has_cusp(c) {
            Ok(())
        } else {
            Err(NcmsError::UnsupportedCusp(format!("cusp {} for level {}", c.name(), self.level)))
        }
    }

    pub fn element(&self, a: i64, b: i64, c: i64, d: i64) -> Result<GroupElement> {
        let g = GroupElement::new(a, b, c, d)?;
        if !g.in_gamma0(self.level) {
            return Err(NcmsError::NotInGroup([a, b, c, d], self.level));
        }
        Ok(g)
    }

    /// σ_∞ = identity; σ₀ = (0, -1/√N; √N, 0).
    pub fn scaling_matrix<T: Real>(&self, cusp: CuspLabel) -> Result<ScalingMatrix<T>> {
        self.require(cusp)?;
        Ok(match cusp {
            CuspLabel::Infinity => ScalingMatrix { a: T::one(), b: T::zero(), c: T::zero(), d: T::one(), cusp },
            CuspLabel::Zero => {
                let r = T::from_int(self.n()).sqrt();
                ScalingMatrix { a: T::zero(), b: -T::one() / r, c: r, d: T::zero(), cusp }
            }
        })
    }

    /// Generator of the stabilizer of a cusp, `±(1 1; 0 1)` after conjugation.
    pub fn stabilizer_generator(&self, cusp: CuspLabel) -> Result<GroupElement> {
        self.require(cusp)?;
        Ok(match cusp {
            CuspLabel::Infinity => GroupElement::translation(1),
            CuspLabel::Zero => GroupElement { a: 1, b: 0, c: -self.n(), d: 1 },
        })
    }

    /// Parabolic classification; `±I` is rejected.
    pub fn is_parabolic(&self, g: &GroupElement) -> Result<Option<Cusp>> {
        if g.is_scalar() {
            return Err(NcmsError::ScalarMatrix);
        }
        if g.trace().abs() != 2 {
            return Ok(None);
        }
        if g.c == 0 {
            return Ok(Some(Cusp::infinity()));
        }
        Ok(Some(Cusp::new(g.a - g.d, 2 * g.c)))
    }

    /// The "effective c" of a coset: bottom-left entry of `σ_𝔟⁻¹γ` in
    /// absolute value. For 𝔟=∞ it is |c|, for 𝔟=0 it is √N·|a|.
    pub fn effective_c(&self, cusp: CuspLabel, g: &GroupElement) -> f64 {
        match cusp {
            CuspLabel::Infinity => g.c.abs() as f64,
            CuspLabel::Zero => (self.n() as f64).sqrt() * g.a.abs() as f64,
        }
    }

    /// Bottom row `(C, D)` of `σ_𝔟⁻¹ γ`, so that `Im(σ_𝔟⁻¹γz) = y/|Cz+D|²`.
    pub fn scaled_bottom_row<T: Real>(&self, cusp: CuspLabel, g: &GroupElement) -> (T, T) {
        match cusp {
            CuspLabel::Infinity => (T::from_int(g.c), T::from_int(g.d)),
            CuspLabel::Zero => {
                let r = T::from_int(self.n()).sqrt();
                (-r * T::from_int(g.a), -r * T::from_int(g.b))
            }
        }
    }

    /// Keys grouping the double cosets `Γ_𝔟\Γ/Γ_∞`: for 𝔟=∞ the values of
    /// `c > 0` (preceded by 0 for the identity coset), for 𝔟=0 the values of
    /// `a > 0` prime to N. Only keys with effective c ≤ `cmax` are listed.
    pub fn coset_keys(&self, cusp: CuspLabel, cmax: f64) -> Result<Vec<i64>> {
        self.require(cusp)?;
        if !(cmax > 0.0) {
            return Err(NcmsError::Domain(format!("Cmax must be positive, got {cmax}")));
        }
        let n = self.n();
        Ok(match cusp {
            CuspLabel::Infinity => {
                let mut keys = vec![0];
                let mut c = n;
                while c as f64 <= cmax {
                    keys.push(c);
                    c += n;
                }
                keys
            }
            CuspLabel::Zero => {
                let r = (n as f64).sqrt();
                (1..).take_while(|&a| r * a as f64 <= cmax).filter(|&a| gcd(a, n) == 1).collect()
            }
        })
    }

    /// Double-coset representatives with a given key (see [`Self::coset_keys`]).
    pub fn cosets_for_key(&self, cusp: CuspLabel, key: i64) -> Vec<GroupElement> {
        let n = self.n();
        match cusp {
            CuspLabel::Infinity => {
                if key == 0 {
                    return vec![GroupElement::identity()];
                }
                let c = key;
                (0..c)
                    .filter(|&d| gcd(c, d) == 1)
                    .map(|d| {
                        let (_, s, t) = ext_gcd(d, c);
                        GroupElement { a: s, b: -t, c, d }
                    })
                    .collect()
            }
            CuspLabel::Zero => {
                let a = key;
                (0..a)
                    .filter(|&b| gcd(a, b) == 1)
                    .map(|b| {
                        let (_, s, t) = ext_gcd(a, b * n);
                        GroupElement { a, b, c: -t * n, d: s }
                    })
                    .collect()
            }
        }
    }

    /// Number of double cosets up to `cmax` without building them.
    pub fn coset_count(&self, cusp: CuspLabel, cmax: f64) -> Result<usize> {
        let keys = self.coset_keys(cusp, cmax)?;
        Ok(keys.iter().map(|&k| if k == 0 { 1 } else { euler_phi(k) as usize }).sum())
    }

    /// Double-coset representatives, ordered by key.
    pub fn coset_reps(&self, cusp: CuspLabel, cmax: f64) -> Result<Vec<GroupElement>> {
        Ok(self.coset_keys(cusp, cmax)?.into_iter().flat_map(|k| self.cosets_for_key(cusp, k)).collect())
    }

    /// Index of the coset `Γ₀(N)g` in `Γ₀(N)\SL₂(ℤ)`: 0 for Γ₀(N) itself,
    /// `1+j` for the coset of `S T^j` (prime N; N=1 has a single coset).
    pub fn sl2z_coset_index(&self, g: &GroupElement) -> usize {
        let n = self.n();
        if n == 1 || g.c % n == 0 {
            return 0;
        }
        let cinv = mod_inverse(g.c, n).expect("prime level");
        1 + (g.d * cinv).rem_euclid(n) as usize
    }

    /// Coset representatives matching [`Self::sl2z_coset_index`].
    pub fn sl2z_coset_rep(&self, index: usize) -> GroupElement {
        if index == 0 {
            GroupElement::identity()
        } else {
            GroupElement { a: 0, b: -1, c: 1, d: index as i64 - 1 }
        }
    }

    pub fn sl2z_coset_count(&self) -> usize {
        if self.n() == 1 {
            1
        } else {
            self.n() as usize + 1
        }
    }

    /// Unimodular steps `g_j ∈ SL₂(ℤ)` from the continued fraction of `p`,
    /// with `g_j·0 = p_{j-1}/q_{j-1}` and `g_j·∞ = p_j/q_j`, so that the
    /// path ∞ → p is the chain of segments `{g_j 0, g_j ∞}`.
    pub fn continued_fraction_steps(&self, p: &Cusp) -> Vec<GroupElement> {
        if p.is_infinity() {
            return Vec::new();
        }
        let (mut num, mut den) = (p.num, p.den);
        let (mut p1, mut q1) = (1i64, 0i64); // p_{j-1}
        let (mut p2, mut q2) = (0i64, 1i64); // p_{j-2}
        let mut steps = Vec::new();
        let mut j = 0;
        while den != 0 {
            let a = num.div_euclid(den);
            (num, den) = (den, num - a * den);
            let (pj, qj) = (a * p1 + p2, a * q1 + q2);
            // det(p_j, p_{j-1}; q_j, q_{j-1}) = (-1)^{j+1}
            let sign = if j % 2 == 0 { -1 } else { 1 };
            steps.push(GroupElement { a: pj, b: sign * p1, c: qj, d: sign * q1 });
            (p2, q2, p1, q1) = (p1, q1, pj, qj);
            j += 1;
        }
        steps
    }

    /// Finds `δ ∈ Γ₀(N)` and a chart maximizing the height of `δz`.
    pub fn reduce_point<T: Real>(&self, z: &UpperHalfPoint<T>) -> Reduction {
        let (x, y) = (z.x.to_f64_lossy(), z.y.to_f64_lossy());
        let n = self.n();
        let mut best = Reduction { element: GroupElement::identity(), chart: CuspLabel::Infinity, height: y };
        let zero_chart = self.has_cusp(CuspLabel::Zero) && n > 1;
        if zero_chart {
            let h0 = y / (n as f64 * (x * x + y * y));
            if h0 > best.height {
                best = Reduction { element: GroupElement::identity(), chart: CuspLabel::Zero, height: h0 };
            }
        }
        let nearest = |m: i64, t: f64| -> Vec<i64> {
            // nearest integers to t coprime to m, one on each side
            let base = t.round() as i64;
            let mut out = Vec::new();
            for dir in [1i64, -1] {
                let mut k = if dir == 1 { base } else { base - 1 };
                for _ in 0..64 {
                    if gcd(m, k) == 1 {
                        out.push(k);
                        break;
                    }
                    k += dir;
                }
            }
            out
        };
        // chart ∞: Im(δz) = y/|cz+d|² ≤ 1/(c² y)
        let mut k = 1i64;
        loop {
            let c = n * k;
            if (c * c) as f64 * y * best.height > 1.0 {
                break;
            }
            for d in nearest(c, -(c as f64) * x) {
                let re = c as f64 * x + d as f64;
                let h = y / (re * re + (c as f64 * y).powi(2));
                if h > best.height {
                    let (_, s, t) = ext_gcd(d, c);
                    best = Reduction { element: GroupElement { a: s, b: -t, c, d }, chart: CuspLabel::Infinity, height: h };
                }
            }
            k += 1;
        }
        if zero_chart {
            // chart 0: Im(σ₀⁻¹δz) = y/(N|az+b|²) ≤ 1/(N a² y)
            let mut a = 1i64;
            loop {
                if (n * a * a) as f64 * y * best.height > 1.0 {
                    break;
                }
                if gcd(a, n) == 1 {
                    for b in nearest(a, -(a as f64) * x) {
                        let re = a as f64 * x + b as f64;
                        let h = y / (n as f64 * (re * re + (a as f64 * y).powi(2)));
                        if h > best.height {
                            let (_, s, t) = ext_gcd(a, b * n);
                            best = Reduction {
                                element: GroupElement { a, b, c: -t * n, d: s },
                                chart: CuspLabel::Zero,
                                height: h,
                            };
                        }
                    }
                }
                a += 1;
            }
        }
        best
    }

    /// `y_F(z) = max over cusps of Im(σ_𝔞⁻¹ z)`.
    pub fn domain_height<T: Real>(&self, z: &UpperHalfPoint<T>) -> f64 {
        let (x, y) = (z.x.to_f64_lossy(), z.y.to_f64_lossy());
        let mut h = y;
        if self.has_cusp(CuspLabel::Zero) {
            h = h.max(y / (self.n() as f64 * (x * x + y * y)));
        }
        h
    }
}

/// CSV rows `a,b,c,d` with a header line.
pub fn cosets_csv(reps: &[GroupElement]) -> String {
    let mut out = String::from("a,b,c,d\n");
    for g in reps {
        out.push_str(&format!("{},{},{},{}\n", g.a, g.b, g.c, g.d));
    }
    out
}
