//! Polynomials in the Chebyshev-T basis, the Jackson/amplifier window
//! construction, and kernel-polynomial reconstruction.

use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::scalar::Real;

/// Uniform grid size used to certify window and Jackson bounds.
pub const CERT_GRID: usize = 100_000;
/// Smallest `eta_rel` accepted by [`window_poly`] without the override.
pub const MIN_DEFAULT_ETA: f64 = 0.02;
const CERT_TOL: f64 = 1e-9;

/// Σ c_k T_k(x).
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Real> ChebyshevPoly<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyList);
        }
        Ok(Self { coeffs })
    }

    /// T_n.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: T) -> T {
        cheb_eval(&self.coeffs, x)
    }

    pub fn eval_many(&self, xs: &[T]) -> Vec<T> {
        xs.par_iter().map(|&x| self.eval(x)).collect()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or_else(T::zero)
                    + other.coeffs.get(i).copied().unwrap_or_else(T::zero)
            })
            .collect();
        Self { coeffs }
    }

    /// Monomial coefficients a_0..a_d. Only well conditioned for small degree.
    pub fn to_monomial(&self) -> Vec<T> {
        let d = self.degree();
        let mut out = vec![T::zero(); d + 1];
        let mut prev = vec![T::zero(); d + 1];
        let mut cur = vec![T::zero(); d + 1];
        prev[0] = T::one();
        if d >= 1 {
            cur[1] = T::one();
        }
        out[0] += self.coeffs[0];
        if d >= 1 {
            for i in 0..=d {
                out[i] += self.coeffs[1] * cur[i];
            }
        }
        for k in 2..=d {
            let mut next = vec![T::zero(); d + 1];
            for i in 0..d {
                next[i + 1] += T::lit(2.0) * cur[i];
            }
            for i in 0..=d {
                next[i] -= prev[i];
            }
            for i in 0..=d {
                out[i] += self.coeffs[k] * next[i];
            }
            prev = cur;
            cur = next;
        }
        out
    }

    /// max |p| over `n` uniform points of [−1, 1].
    pub fn grid_sup(&self, n: usize) -> T {
        uniform_grid::<T>(n)
            .par_iter()
            .map(|&x| self.eval(x).abs())
            .reduce(T::zero, |a, b| a.max(b))
    }
}

/// Clenshaw recurrence for Σ c_k T_k(x).
pub fn cheb_eval<T: Real>(coeffs: &[T], x: T) -> T {
    let two_x = x + x;
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = two_x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + coeffs.first().copied().unwrap_or_else(T::zero)
}

/// `n` equispaced points from −1 to 1 inclusive.
pub fn uniform_grid<T: Real>(n: usize) -> Vec<T> {
    if n == 1 {
        return vec![T::zero()];
    }
    let step = T::lit(2.0) / T::from_usize_lossy(n - 1);
    (0..n).map(|i| (-T::one() + T::from_usize_lossy(i) * step).min(T::one())).collect()
}

/// cos(π(i + 1/2)/m), i = 0..m.
pub fn gauss_nodes<T: Real>(m: usize) -> Vec<T> {
    (0..m)
        .map(|i| (T::PI() * (T::from_usize_lossy(i) + T::lit(0.5)) / T::from_usize_lossy(m)).cos())
        .collect()
}

/// Values of Σ c_j T_j at the `m` Chebyshev–Gauss nodes (needs len(c) ≤ m).
pub fn values_at_gauss_nodes<T: Real>(coeffs: &[T], m: usize) -> Vec<T> {
    assert!(coeffs.len() <= m, "degree must be below the node count");
    let len = 2 * m;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); len];
    for (j, &c) in coeffs.iter().enumerate() {
        buf[j] = Complex::from_polar(c, T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(len));
    }
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    buf[..m].iter().map(|z| z.re).collect()
}

/// Interpolating coefficients c_0..c_{m−1} from values at the `m` Chebyshev–Gauss nodes.
pub fn coeffs_from_gauss_values<T: Real>(values: &[T]) -> Vec<T> {
    let m = values.len();
    let len = 2 * m;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); len];
    for (i, &v) in values.iter().enumerate() {
        buf[i] = Complex::new(v, T::zero());
    }
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    let norm = T::lit(2.0) / T::from_usize_lossy(m);
    let mut out: Vec<T> = (0..m)
        .map(|j| {
            let tw = Complex::from_polar(T::one(), T::PI() * T::from_usize_lossy(j) / T::from_usize_lossy(len));
            (tw * buf[j]).re * norm
        })
        .collect();
    out[0] /= T::lit(2.0);
    out
}

/// Values at the extrema cos(πi/m), i = 0..=m (needs len(c) ≤ m + 1).
pub fn values_at_extrema<T: Real>(coeffs: &[T], m: usize) -> Vec<T> {
    assert!(m >= 1 && coeffs.len() <= m + 1);
    let len = 2 * m;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); len];
    for (j, &c) in coeffs.iter().enumerate() {
        buf[j] = Complex::new(c, T::zero());
    }
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    buf[..=m].iter().map(|z| z.re).collect()
}

/// Jackson damping factors g_0..g_N.
pub fn jackson_damping<T: Real>(n_max: usize) -> Vec<T> {
    let np1 = T::from_usize_lossy(n_max + 1);
    let q = T::PI() / np1;
    let cot = q.cos() / q.sin();
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                return T::one();
            }
            let nf = T::from_usize_lossy(n);
            ((np1 - nf) * (q * nf).cos() + (q * nf).sin() * cot) / np1
        })
        .collect()
}

/// The trapezoid target: 1 on [a, b], −1 outside [a − κ, b + κ], linear between.
pub fn trapezoid<T: Real>(a_bar: T, b_bar: T, kappa: T, x: T) -> T {
    let one = T::one();
    if x >= a_bar && x <= b_bar {
        one
    } else if x < a_bar - kappa || x > b_bar + kappa {
        -one
    } else if x < a_bar {
        -one + T::lit(2.0) * (x - (a_bar - kappa)) / kappa
    } else {
        one - T::lit(2.0) * (x - b_bar) / kappa
    }
}

fn check_interval<T: Real>(a_bar: T, b_bar: T, kappa: T) -> Result<()> {
    if !(kappa > T::zero()) || !(a_bar < b_bar) || !(a_bar - kappa > -T::one()) || !(b_bar + kappa < T::one()) {
        return Err(Error::BadInterval(format!(
            "need -1 < a-kappa < a < b < b+kappa < 1, got a={a_bar}, b={b_bar}, kappa={kappa}"
        )));
    }
    Ok(())
}

fn jackson_coeffs<T: Real>(a_bar: T, b_bar: T, kappa: T, n: usize) -> ChebyshevPoly<T> {
    let m = 4 * n.max(1);
    let samples: Vec<T> = gauss_nodes::<T>(m).iter().map(|&x| trapezoid(a_bar, b_bar, kappa, x)).collect();
    let raw = coeffs_from_gauss_values(&samples);
    let damp = jackson_damping::<T>(n);
    ChebyshevPoly { coeffs: (0..=n).map(|j| raw[j] * damp[j]).collect() }
}

/// Jackson-damped Chebyshev approximation of [`trapezoid`], certified on a
/// uniform grid against sup|J − g| ≤ 6/(κn) and |J| ≤ 5/4.
pub fn jackson_approx<T: Real>(a_bar: T, b_bar: T, kappa: T, n: usize) -> Result<ChebyshevPoly<T>> {
    check_interval(a_bar, b_bar, kappa)?;
    if n == 0 {
        return Err(Error::OutOfRange("Jackson degree must be positive".into()));
    }
    let j = jackson_coeffs(a_bar, b_bar, kappa, n);
    let bound = T::lit(6.0) / (kappa * T::from_usize_lossy(n));
    let (err, sup) = uniform_grid::<T>(CERT_GRID)
        .par_iter()
        .map(|&x| {
            let v = j.eval(x);
            ((v - trapezoid(a_bar, b_bar, kappa, x)).abs(), v.abs())
        })
        .reduce(|| (T::zero(), T::zero()), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    if err > bound || sup > T::lit(1.25) {
        return Err(Error::Certification(format!(
            "Jackson approximation error {err} exceeds {bound} or sup {sup} exceeds 5/4"
        )));
    }
    Ok(j)
}

/// Bernoulli tail probability P[Bin(k, p) ≥ k/2] with p = (1 + x)/2.
pub fn amplifier_value<T: Real>(k: usize, x: T) -> T {
    let p = ((T::one() + x) / T::lit(2.0)).max(T::zero()).min(T::one());
    let q = T::one() - p;
    let start = k.div_ceil(2);
    if p == T::one() {
        return T::one();
    }
    if p == T::zero() {
        return if start == 0 { T::one() } else { T::zero() };
    }
    let (lp, lq) = (p.ln(), q.ln());
    let mut ln_binom = T::zero();
    let mut total = T::zero();
    for j in 0..=k {
        if j >= start {
            let jf = T::from_usize_lossy(j);
            total += (ln_binom + jf * lp + T::from_usize_lossy(k - j) * lq).exp();
        }
        if j < k {
            ln_binom += T::from_usize_lossy(k - j).ln() - T::from_usize_lossy(j + 1).ln();
        }
    }
    total.min(T::one())
}

/// A_k in the Chebyshev basis.
pub fn amplifying_poly<T: Real>(k: usize) -> Result<ChebyshevPoly<T>> {
    if k == 0 {
        return Err(Error::OutOfRange("amplifier order must be at least 1".into()));
    }
    let vals: Vec<T> = gauss_nodes::<T>(k + 1).iter().map(|&x| amplifier_value(k, x)).collect();
    Ok(ChebyshevPoly { coeffs: coeffs_from_gauss_values(&vals) })
}

/// outer(s · inner(x)) by interpolation at Chebyshev–Gauss nodes.
pub fn compose<T: Real>(outer: &ChebyshevPoly<T>, inner: &ChebyshevPoly<T>, scale_inner: T) -> Result<ChebyshevPoly<T>> {
    let d = outer.degree() * inner.degree();
    let m = (d + 1).max(1024).max(inner.coeffs.len());
    let inner_vals = values_at_gauss_nodes(&inner.coeffs, m);
    let mut worst = T::zero();
    for &v in &inner_vals {
        worst = worst.max((scale_inner * v).abs());
    }
    let tol = T::lit(1e-12);
    if worst > T::one() + tol {
        return Err(Error::RangeViolation(format!("scaled inner polynomial reaches {worst} outside [-1, 1]")));
    }
    let vals: Vec<T> = inner_vals.par_iter().map(|&v| outer.eval(scale_inner * v)).collect();
    let mut coeffs = coeffs_from_gauss_values(&vals);
    coeffs.truncate(d + 1);
    Ok(ChebyshevPoly { coeffs })
}

/// Grid certificate of a window polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowCertificate {
    pub grid_points: usize,
    pub extrema_points: usize,
    /// max |w| over the uniform grid and the extrema.
    pub max_abs: f64,
    /// Largest amount by which any window constraint is exceeded (0 if none).
    pub max_violation: f64,
    /// sup |J − g| on the uniform grid.
    pub jackson_error: f64,
    /// max |coefficient form − nested form| at the agreement points.
    pub nested_agreement: f64,
}

#[derive(Clone, Debug)]
pub struct WindowPoly<T> {
    pub poly: ChebyshevPoly<T>,
    pub jackson: ChebyshevPoly<T>,
    pub amplifier: ChebyshevPoly<T>,
    pub a_bar: T,
    pub b_bar: T,
    pub eta_rel: T,
    pub kappa: T,
    pub tau: T,
    pub jackson_degree: usize,
    pub amplifier_order: usize,
    pub certificate: WindowCertificate,
}

/// κ = η/4, n = ⌈24/κ⌉, k = ⌈6 ln(4/η)⌉.
pub fn window_params(eta_rel: f64) -> (f64, usize, usize) {
    let kappa = eta_rel / 4.0;
    (kappa, tolerant_ceil(24.0 / kappa), tolerant_ceil(6.0 * (4.0 / eta_rel).ln()))
}

fn tolerant_ceil(x: f64) -> usize {
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0) as usize
}

pub fn window_poly<T: Real>(a_bar: T, b_bar: T, eta_rel: T) -> Result<WindowPoly<T>> {
    window_poly_with(a_bar, b_bar, eta_rel, false)
}

/// [`window_poly`] with the small-η degree guard optionally lifted.
pub fn window_poly_with<T: Real>(a_bar: T, b_bar: T, eta_rel: T, allow_large: bool) -> Result<WindowPoly<T>> {
    let eta = eta_rel.to_f64_lossy();
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::OutOfRange(format!("eta_rel must lie in (0,1), got {eta}")));
    }
    if eta < MIN_DEFAULT_ETA && !allow_large {
        return Err(Error::OutOfRange(format!(
            "eta_rel {eta} below {MIN_DEFAULT_ETA} needs the large-window override"
        )));
    }
    let (kappa_f, n, k) = window_params(eta);
    let kappa = T::lit(kappa_f);
    check_interval(a_bar, b_bar, kappa)?;
    let tau = T::lit((-(k as f64) / 6.0).exp());
    let four_fifths = T::lit(0.8);

    let jackson = jackson_coeffs(a_bar, b_bar, kappa, n);
    let amplifier = amplifying_poly::<T>(k)?;
    let poly = compose(&amplifier, &jackson, four_fifths)?;

    let violation = |x: T, w: T| -> T {
        let mut v = (w.abs() - T::one()).max(T::zero());
        if x >= a_bar && x <= b_bar {
            v = v.max(T::one() - tau - w);
        } else if x < a_bar - kappa || x > b_bar + kappa {
            v = v.max(w - tau).max(-w);
        }
        v.max(T::zero())
    };

    let grid = uniform_grid::<T>(CERT_GRID);
    let (grid_abs, grid_viol, jerr) = grid
        .par_iter()
        .map(|&x| {
            let j = jackson.eval(x);
            let w = amplifier_value(k, four_fifths * j);
            (w.abs(), violation(x, w), (j - trapezoid(a_bar, b_bar, kappa, x)).abs())
        })
        .reduce(
            || (T::zero(), T::zero(), T::zero()),
            |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2)),
        );

    let m = 2 * poly.degree().max(1);
    let ext_vals = values_at_extrema(&poly.coeffs, m);
    let (ext_abs, ext_viol) = ext_vals
        .par_iter()
        .enumerate()
        .map(|(i, &w)| {
            let x = (T::PI() * T::from_usize_lossy(i) / T::from_usize_lossy(m)).cos();
            (w.abs(), violation(x, w))
        })
        .reduce(|| (T::zero(), T::zero()), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    let phi = 0.618_033_988_749_894_9_f64;
    let agreement = (0..1000)
        .into_par_iter()
        .map(|i| {
            let x = T::lit(-1.0 + 2.0 * ((i as f64 + 0.5) * phi).fract());
            let nested = amplifier_value(k, four_fifths * jackson.eval(x));
            (poly.eval(x) - nested).abs()
        })
        .reduce(T::zero, |a, b| a.max(b));

    let certificate = WindowCertificate {
        grid_points: grid.len(),
        extrema_points: ext_vals.len(),
        max_abs: grid_abs.max(ext_abs).to_f64_lossy(),
        max_violation: grid_viol.max(ext_viol).to_f64_lossy(),
        jackson_error: jerr.to_f64_lossy(),
        nested_agreement: agreement.to_f64_lossy(),
    };
    if certificate.max_violation > CERT_TOL || certificate.jackson_error > 0.25 || certificate.nested_agreement > 1e-8 {
        return Err(Error::Certification(format!(
            "window certification failed: violation {}, Jackson error {}, coefficient/nested gap {}",
            certificate.max_violation, certificate.jackson_error, certificate.nested_agreement
        )));
    }

    Ok(WindowPoly {
        poly,
        jackson,
        amplifier,
        a_bar,
        b_bar,
        eta_rel,
        kappa,
        tau,
        jackson_degree: n,
        amplifier_order: k,
        certificate,
    })
}

impl<T: Real> WindowPoly<T> {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// `k,coeff` rows under a parameter comment.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# a_bar={} b_bar={} eta_rel={} n={} k={} tau={} d={}\nk,coeff\n",
            sig12(self.a_bar.to_f64_lossy()),
            sig12(self.b_bar.to_f64_lossy()),
            sig12(self.eta_rel.to_f64_lossy()),
            self.jackson_degree,
            self.amplifier_order,
            sig12(self.tau.to_f64_lossy()),
            self.degree()
        );
        for (i, c) in self.poly.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{i},{}", sig12(c.to_f64_lossy()));
        }
        out
    }
}

/// Damped KPM density: (g_0μ_0 + 2Σ_{n≥1} g_nμ_nT_n(x)) / (π√(1 − x²)).
pub fn kpm_reconstruct<T: Real>(moments: &[T], grid: &[T]) -> Result<Vec<T>> {
    if moments.is_empty() {
        return Err(Error::EmptyList);
    }
    if let Some(&x) = grid.iter().find(|&&x| !(x > -T::one() && x < T::one())) {
        return Err(Error::GridOutOfRange(x.to_f64_lossy()));
    }
    let g = jackson_damping::<T>(moments.len() - 1);
    let mut coeffs: Vec<T> = moments.iter().zip(&g).map(|(&m, &d)| T::lit(2.0) * m * d).collect();
    coeffs[0] = moments[0] * g[0];
    Ok(grid
        .par_iter()
        .map(|&x| cheb_eval(&coeffs, x) / (T::PI() * (T::one() - x * x).sqrt()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize) -> ChebyshevPoly<f64> {
        ChebyshevPoly::basis(n)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(t(3).eval(1.0), 1.0);
        assert!((t(3).eval(0.5) + 1.0).abs() < 1e-15);
        assert!((t(4).eval(-1.0) - 1.0).abs() < 1e-15);
        assert!(ChebyshevPoly::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn monomial_agreement() {
        let p = ChebyshevPoly::new((0..=20).map(|i| ((i * 7 % 11) as f64 - 5.0) / 10.0).collect()).unwrap();
        let mono = p.to_monomial();
        for i in 0..=40 {
            let x = -1.0 + i as f64 / 20.0;
            let horner = mono.iter().rev().fold(0.0, |acc, &a| acc * x + a);
            assert!((horner - p.eval(x)).abs() < 1e-9);
        }
        assert_eq!(t(3).to_monomial(), vec![0.0, -3.0, 0.0, 4.0]);
    }

    #[test]
    fn fft_transforms_round_trip() {
        let c: Vec<f64> = (0..9).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let p = ChebyshevPoly::new(c.clone()).unwrap();
        let vals = values_at_gauss_nodes(&c, 16);
        for (x, v) in gauss_nodes::<f64>(16).iter().zip(&vals) {
            assert!((p.eval(*x) - v).abs() < 1e-13);
        }
        let back = coeffs_from_gauss_values(&vals);
        for (i, b) in back.iter().enumerate() {
            let expect = c.get(i).copied().unwrap_or(0.0);
            assert!((b - expect).abs() < 1e-13);
        }
        let ext = values_at_extrema(&c, 10);
        for (i, v) in ext.iter().enumerate() {
            let x = (std::f64::consts::PI * i as f64 / 10.0).cos();
            assert!((p.eval(x) - v).abs() < 1e-13);
        }
    }

    #[test]
    fn amplifier_examples() {
        let a1 = amplifying_poly::<f64>(1).unwrap();
        assert!((a1.eval(0.0) - 0.5).abs() < 1e-14);
        assert!((a1.eval(0.3) - 0.65).abs() < 1e-14);
        let a2 = amplifying_poly::<f64>(2).unwrap();
        assert!((a2.eval(0.0) - 0.75).abs() < 1e-14);
        assert!(amplifying_poly::<f64>(0).is_err());
        for k in 1..=40 {
            let a = amplifying_poly::<f64>(k).unwrap();
            assert_eq!(a.degree(), k);
            assert!((a.eval(1.0) - 1.0).abs() < 1e-10);
            assert!(a.eval(-1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn amplifier_envelope_and_monotone() {
        let grid = uniform_grid::<f64>(10_000);
        for k in 1..=40 {
            let a = amplifying_poly::<f64>(k).unwrap();
            let tau = (-(k as f64) / 6.0).exp();
            let mut prev = f64::NEG_INFINITY;
            for &x in &grid {
                let v = a.eval(x);
                assert!(v >= prev - 1e-12, "k={k} not monotone at {x}");
                prev = v;
                if x >= 0.6 {
                    assert!(v >= 1.0 - tau - 1e-12);
                }
                if x <= -0.6 {
                    assert!(v <= tau + 1e-12);
                }
            }
        }
    }

    #[test]
    fn compose_examples() {
        let t6 = compose(&t(2), &t(3), 1.0).unwrap();
        assert_eq!(t6.degree(), 6);
        for (i, c) in t6.coeffs().iter().enumerate() {
            assert!((c - if i == 6 { 1.0 } else { 0.0 }).abs() < 1e-10);
        }
        let t4 = compose(&t(2), &t(2), 1.0).unwrap();
        for (i, c) in t4.coeffs().iter().enumerate() {
            assert!((c - if i == 4 { 1.0 } else { 0.0 }).abs() < 1e-10);
        }
        let inner = ChebyshevPoly::new(vec![0.1, 0.3, -0.2]).unwrap();
        let id = compose(&t(1), &inner, 0.5).unwrap();
        for x in [-0.9, -0.1, 0.4, 1.0] {
            assert!((id.eval(x) - 0.5 * inner.eval(x)).abs() < 1e-12);
        }
        assert!(matches!(compose(&t(2), &inner, 4.0), Err(Error::RangeViolation(_))));
    }

    #[test]
    fn jackson_examples() {
        let kappa = 0.1;
        let n = 240;
        let j = jackson_approx(-0.2f64, 0.3, kappa, n).unwrap();
        assert_eq!(j.degree(), n);
        assert!((j.eval(0.05) - 1.0).abs() <= 0.25);
        assert!((j.eval(0.9) + 1.0).abs() <= 0.25);
        assert!((j.eval(-0.9) + 1.0).abs() <= 0.25);

        let sym = jackson_approx(-0.2f64, 0.2, kappa, n).unwrap();
        for (i, c) in sym.coeffs().iter().enumerate() {
            if i % 2 == 1 {
                assert!(c.abs() < 1e-9);
            }
        }
        let a1j = compose(&amplifying_poly(1).unwrap(), &j, 0.8).unwrap();
        for x in [-0.7, 0.0, 0.25, 0.8] {
            assert!((a1j.eval(x) - (1.0 + 0.8 * j.eval(x)) / 2.0).abs() < 1e-12);
        }
        assert!(matches!(jackson_approx(-0.95, 0.3, 0.1, n), Err(Error::BadInterval(_))));
        assert!(matches!(jackson_approx(0.3, 0.2, 0.1, n), Err(Error::BadInterval(_))));
    }

    #[test]
    fn window_params_exact() {
        let (kappa, n, k) = window_params(0.1);
        assert!((kappa - 0.025).abs() < 1e-15);
        assert_eq!((n, k, n * k), (960, 23, 22080));
        assert!(((-(23.0f64) / 6.0).exp() - 0.0216374).abs() < 1e-7);
    }

    #[test]
    fn window_small_eta() {
        let w = window_poly(-0.3f64, 0.4, 0.4).unwrap();
        let (_, n, k) = window_params(0.4);
        assert_eq!(w.degree(), n * k);
        assert!(w.tau <= 0.1 + 1e-15);
        assert!(w.certificate.max_abs <= 1.0 + 1e-9);
        assert_eq!(w.certificate.max_violation, 0.0);
        let mid = w.poly.eval(0.05);
        assert!(mid >= 1.0 - w.tau && mid <= 1.0 + 1e-12);
        for x in [-1.0, 1.0] {
            let v = w.poly.eval(x);
            assert!(v >= -1e-12 && v <= w.tau);
        }
        let csv = w.to_csv();
        assert!(csv.starts_with("# a_bar=-0.3 b_bar=0.4 eta_rel=0.4 n=240 k=14"));
        assert_eq!(csv.lines().count(), 2 + w.degree() + 1);
    }

    #[test]
    fn window_errors() {
        assert!(matches!(window_poly(-0.3f64, 0.4, 0.0), Err(Error::OutOfRange(_))));
        assert!(matches!(window_poly(-0.3f64, 0.4, 0.01), Err(Error::OutOfRange(_))));
        assert!(matches!(window_poly(-0.99f64, 0.4, 0.2), Err(Error::BadInterval(_))));
    }

    #[test]
    fn kpm_examples() {
        let grid: Vec<f64> = (1..200).map(|i| -1.0 + i as f64 / 100.0).collect();
        let f = kpm_reconstruct(&[1.0], &grid).unwrap();
        for (x, v) in grid.iter().zip(&f) {
            assert!((v - 1.0 / (std::f64::consts::PI * (1.0 - x * x).sqrt())).abs() < 1e-14);
        }
        assert!(matches!(kpm_reconstruct(&[1.0], &[1.0]), Err(Error::GridOutOfRange(_))));

        // Flat measure dx/2: μ_n = ∫ T_n/2 = (1 + (−1)^n) / (2(1 − n²)).
        let n_max = 64;
        let mu: Vec<f64> = (0..=n_max)
            .map(|n| if n % 2 == 1 { 0.0 } else { 1.0 / (1.0 - (n * n) as f64) })
            .collect();
        let m = 4000;
        let nodes = gauss_nodes::<f64>(m);
        let vals = kpm_reconstruct(&mu, &nodes).unwrap();
        assert!(vals.iter().all(|&v| v >= -1e-12));
        let integral: f64 = nodes
            .iter()
            .zip(&vals)
            .map(|(x, v)| v * (1.0 - x * x).sqrt() * std::f64::consts::PI / m as f64)
            .sum();
        assert!((integral - mu[0]).abs() <= 0.02 * mu[0]);

        let spike: Vec<f64> = (0..=32).map(|n| t(n).eval(0.0)).collect();
        let xs = [-0.5, -0.1, 0.0, 0.1, 0.5];
        let f = kpm_reconstruct(&spike, &xs).unwrap();
        assert!((f[0] - f[4]).abs() < 1e-12 && (f[1] - f[3]).abs() < 1e-12);
        assert!(f[2] > f[1] && f[1] > f[0]);
    }

    #[test]
    fn jackson_damping_properties() {
        let g = jackson_damping::<f64>(16);
        assert_eq!(g[0], 1.0);
        assert!(g.windows(2).all(|w| w[1] <= w[0]));
        assert!(g[16] > 0.0 && g[16] < 0.05);
    }

    #[test]
    fn f32_instantiation() {
        let p = ChebyshevPoly::<f32>::basis(3);
        assert!((p.eval(0.5f32) + 1.0).abs() < 1e-6);
    }
}
