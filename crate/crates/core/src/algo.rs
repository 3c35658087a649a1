//! End-to-end estimation algorithms: n-time correlation functions, densities
//! of states (global and local), linear response, and KPM sketches, together
//! with unit-constant complexity reports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::block::BlockEncoding;
use crate::cheb::{kpm_reconstruct, window_params, window_poly_with, WindowPoly};
use crate::error::{Error, Result};
use crate::estimate::{estimate_complex, estimate_observable, EstimationResult, Mode};
use crate::pauli::PauliSum;
use crate::prep::{prepare_maximally_mixed, PreparationUnitary};
use crate::scalar::Real;
use crate::transform::{apply_polynomial, chebyshev_encoding, evolution_cost};

#[derive(Clone, Debug)]
pub struct CorrelationSpec<T> {
    pub hamiltonian: PauliSum<T>,
    /// (O_j, t_j) in operator order.
    pub observables: Vec<(PauliSum<T>, T)>,
    pub state: PreparationUnitary<T>,
    pub eps: f64,
    pub delta: f64,
}

impl<T: Real> CorrelationSpec<T> {
    /// τ_j = t_{j+1} − t_j for j = 0..=n with t_0 = t_{n+1} = 0.
    pub fn time_steps(&self) -> Vec<T> {
        let mut padded = vec![T::zero()];
        padded.extend(self.observables.iter().map(|(_, t)| *t));
        padded.push(T::zero());
        padded.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Accuracy of each evolution encoding: ε/(2(n+1)²).
    pub fn evolution_accuracy(&self) -> f64 {
        let n1 = (self.observables.len() + 1) as f64;
        self.eps / (2.0 * n1 * n1)
    }

    fn validate(&self) -> Result<()> {
        check_eps_delta(self.eps, self.delta)?;
        if self.observables.is_empty() {
            return Err(Error::EmptyObservables);
        }
        let q = self.hamiltonian.qubits();
        if let Some((o, _)) = self.observables.iter().find(|(o, _)| o.qubits() != q) {
            return Err(Error::DimensionMismatch(format!(
                "observable on {} qubits, Hamiltonian on {q}",
                o.qubits()
            )));
        }
        check_state_dim(&self.state, self.hamiltonian.dim())
    }
}

/// Tr(ρ · Π_j O_j(t_j)) from e^{iHτ_0} Π_j O_j e^{iHτ_j}.
pub fn correlate<T: Real>(spec: &CorrelationSpec<T>, mode: Mode, seed: Option<u64>) -> Result<EstimationResult> {
    spec.validate()?;
    let acc = T::lit(spec.evolution_accuracy());
    let h = &spec.hamiltonian;
    let taus = spec.time_steps();
    let mut factors = Vec::with_capacity(2 * taus.len());
    factors.push(crate::transform::evolution_encoding(h, taus[0], acc)?);
    for ((o, _), &tau) in spec.observables.iter().zip(&taus[1..]) {
        factors.push(BlockEncoding::encode_pauli_sum(o)?);
        factors.push(crate::transform::evolution_encoding(h, tau, acc)?);
    }
    let gamma = BlockEncoding::product(&factors)?;
    estimate_complex(&gamma, &spec.state, spec.eps / 2.0, spec.delta, mode, seed)
}

/// What a sketch measures: the spectral density of H weighted by I/D, by a
/// site state, or by B(·)C against a state.
#[derive(Clone, Debug)]
pub enum SketchKind<T> {
    Dos,
    Ldos(PreparationUnitary<T>),
    Response {
        b: PauliSum<T>,
        c: PauliSum<T>,
        state: PreparationUnitary<T>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SketchMode<T> {
    /// Mass of the density on [a, b], in energy units.
    Integral { a: T, b: T },
    /// Chebyshev moments of orders 0..=N.
    Moments(usize),
}

#[derive(Clone, Debug)]
pub struct SketchRequest<T> {
    pub hamiltonian: PauliSum<T>,
    pub kind: SketchKind<T>,
    pub mode: SketchMode<T>,
    pub eps: f64,
    pub delta: f64,
    /// Upper bound on the normalized density of any eigenspace.
    pub rho_max: f64,
    /// Lifts the degree guard of the window construction.
    pub allow_large_window: bool,
}

impl<T: Real> SketchRequest<T> {
    pub fn new(hamiltonian: PauliSum<T>, kind: SketchKind<T>, mode: SketchMode<T>, eps: f64, delta: f64) -> Self {
        Self {
            hamiltonian,
            kind,
            mode,
            eps,
            delta,
            rho_max: 1.0,
            allow_large_window: false,
        }
    }

    pub fn with_rho_max(mut self, rho_max: f64) -> Self {
        self.rho_max = rho_max;
        self
    }

    pub fn allow_large_window(mut self, allow: bool) -> Self {
        self.allow_large_window = allow;
        self
    }

    pub fn alpha(&self) -> T {
        self.hamiltonian.scale()
    }

    /// β·γ for response sketches, 1 otherwise.
    pub fn operator_scale(&self) -> f64 {
        match &self.kind {
            SketchKind::Response { b, c, .. } => (b.scale() * c.scale()).to_f64_lossy(),
            _ => 1.0,
        }
    }

    /// Relative window half-width η = ε/(3·ρ_max·β·γ).
    pub fn window_eta(&self) -> f64 {
        self.eps / (3.0 * self.rho_max * self.operator_scale())
    }

    fn validate(&self) -> Result<()> {
        check_eps_delta(self.eps, self.delta)?;
        if !(self.rho_max > 0.0) || !self.rho_max.is_finite() {
            return Err(Error::OutOfRange(format!("rho_max must be positive, got {}", self.rho_max)));
        }
        let d = self.hamiltonian.dim();
        match &self.kind {
            SketchKind::Dos => {}
            SketchKind::Ldos(s) => check_state_dim(s, d)?,
            SketchKind::Response { b, c, state } => {
                for op in [b, c] {
                    if op.qubits() != self.hamiltonian.qubits() {
                        return Err(Error::DimensionMismatch(format!(
                            "response operator on {} qubits, Hamiltonian on {}",
                            op.qubits(),
                            self.hamiltonian.qubits()
                        )));
                    }
                }
                check_state_dim(state, d)?;
            }
        }
        if let SketchMode::Integral { a, b } = self.mode {
            let alpha = self.alpha();
            if !(-alpha < a && a < b && b < alpha) {
                return Err(Error::BadInterval(format!("need -alpha < a < b < alpha, got [{a}, {b}] with alpha = {alpha}")));
            }
        }
        Ok(())
    }
}

/// Window parameters reported alongside integral sketches.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowMeta {
    pub a_bar: f64,
    pub b_bar: f64,
    pub eta_rel: f64,
    pub kappa: f64,
    pub tau: f64,
    pub jackson_degree: usize,
    pub amplifier_order: usize,
    pub degree: usize,
    pub max_violation: f64,
}

impl<T: Real> From<&WindowPoly<T>> for WindowMeta {
    fn from(w: &WindowPoly<T>) -> Self {
        Self {
            a_bar: w.a_bar.to_f64_lossy(),
            b_bar: w.b_bar.to_f64_lossy(),
            eta_rel: w.eta_rel.to_f64_lossy(),
            kappa: w.kappa.to_f64_lossy(),
            tau: w.tau.to_f64_lossy(),
            jackson_degree: w.jackson_degree,
            amplifier_order: w.amplifier_order,
            degree: w.degree(),
            max_violation: w.certificate.max_violation,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SketchResult {
    /// One entry per moment, or a single entry for an integral.
    pub values: Vec<EstimationResult>,
    /// Moment orders, or the window degree for an integral.
    pub chebyshev_orders: Vec<usize>,
    pub cost_report: ComplexityReport,
    pub window_meta: Option<WindowMeta>,
}

/// Density of states or local density of states.
pub fn dos_sketch<T: Real>(req: &SketchRequest<T>, mode: Mode, seed: Option<u64>) -> Result<SketchResult> {
    req.validate()?;
    let state = match &req.kind {
        SketchKind::Dos => prepare_maximally_mixed(req.hamiltonian.dim())?,
        SketchKind::Ldos(s) => s.clone(),
        SketchKind::Response { .. } => {
            return Err(Error::OutOfRange("dos_sketch needs a dos or ldos request".into()));
        }
    };
    let h = BlockEncoding::encode_pauli_sum(&req.hamiltonian)?;
    let cost_report = complexity_report(Subject::Sketch(req))?;
    match req.mode {
        SketchMode::Integral { a, b } => {
            let third = req.eps / 3.0;
            let w = window(req, a, b)?;
            let enc = apply_polynomial(&h, &w.poly, T::lit(third))?;
            let v = estimate_observable(&enc, &state, third, req.delta, mode, seed)?;
            Ok(SketchResult {
                values: vec![v],
                chebyshev_orders: vec![w.degree()],
                cost_report,
                window_meta: Some(WindowMeta::from(&w)),
            })
        }
        SketchMode::Moments(n_max) => {
            let values = (0..=n_max)
                .into_par_iter()
                .map(|n| {
                    let enc = chebyshev_encoding(&h, n)?;
                    estimate_observable(&enc, &state, req.eps, req.delta, mode, moment_seed(seed, n))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SketchResult {
                values,
                chebyshev_orders: (0..=n_max).collect(),
                cost_report,
                window_meta: None,
            })
        }
    }
}

/// ⟨B f(H/α) C⟩ with f the window polynomial or T_n.
pub fn response_sketch<T: Real>(req: &SketchRequest<T>, mode: Mode, seed: Option<u64>) -> Result<SketchResult> {
    req.validate()?;
    let SketchKind::Response { b, c, state } = &req.kind else {
        return Err(Error::OutOfRange("response_sketch needs a response request".into()));
    };
    let h = BlockEncoding::encode_pauli_sum(&req.hamiltonian)?;
    let be = BlockEncoding::encode_pauli_sum(b)?;
    let ce = BlockEncoding::encode_pauli_sum(c)?;
    let cost_report = complexity_report(Subject::Sketch(req))?;
    match req.mode {
        SketchMode::Integral { a, b: hi } => {
            let third = req.eps / 3.0;
            let w = window(req, a, hi)?;
            let mid = apply_polynomial(&h, &w.poly, T::lit(third))?;
            let xi = BlockEncoding::product(&[be, mid, ce])?;
            let v = estimate_complex(&xi, state, third, req.delta, mode, seed)?;
            Ok(SketchResult {
                values: vec![v],
                chebyshev_orders: vec![w.degree()],
                cost_report,
                window_meta: Some(WindowMeta::from(&w)),
            })
        }
        SketchMode::Moments(n_max) => {
            let values = (0..=n_max)
                .into_par_iter()
                .map(|n| {
                    let tn = chebyshev_encoding(&h, n)?;
                    let z = BlockEncoding::product(&[be.clone(), tn, ce.clone()])?;
                    estimate_complex(&z, state, req.eps, req.delta, mode, moment_seed(seed, n))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SketchResult {
                values,
                chebyshev_orders: (0..=n_max).collect(),
                cost_report,
                window_meta: None,
            })
        }
    }
}

/// Dispatches on the request kind.
pub fn sketch<T: Real>(req: &SketchRequest<T>, mode: Mode, seed: Option<u64>) -> Result<SketchResult> {
    match req.kind {
        SketchKind::Response { .. } => response_sketch(req, mode, seed),
        _ => dos_sketch(req, mode, seed),
    }
}

/// Moments followed by the damped KPM reconstruction on `grid` (scaled units).
pub fn kpm_sketch<T: Real>(
    req: &SketchRequest<T>,
    grid: &[T],
    mode: Mode,
    seed: Option<u64>,
) -> Result<(SketchResult, Vec<T>)> {
    if !matches!(req.mode, SketchMode::Moments(_)) {
        return Err(Error::OutOfRange("kpm_sketch needs moments mode".into()));
    }
    let res = sketch(req, mode, seed)?;
    let moments: Vec<T> = res.values.iter().map(|v| T::lit(v.value.re)).collect();
    let f = kpm_reconstruct(&moments, grid)?;
    Ok((res, f))
}

fn window<T: Real>(req: &SketchRequest<T>, a: T, b: T) -> Result<WindowPoly<T>> {
    let alpha = req.alpha();
    window_poly_with(a / alpha, b / alpha, T::lit(req.window_eta()), req.allow_large_window)
}

fn moment_seed(seed: Option<u64>, n: usize) -> Option<u64> {
    seed.map(|s| s.wrapping_add(n as u64))
}

fn check_eps_delta(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange(format!("eps and delta must lie in (0,1), got {eps}, {delta}")));
    }
    Ok(())
}

fn check_state_dim<T: Real>(s: &PreparationUnitary<T>, d: usize) -> Result<()> {
    if s.system_dim() != d {
        return Err(Error::DimensionMismatch(format!("state on dimension {}, Hamiltonian on {d}", s.system_dim())));
    }
    Ok(())
}

/// Unit-constant evaluations of the asymptotic cost formulas, keyed by term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub algorithm: String,
    pub terms: BTreeMap<String, f64>,
}

impl ComplexityReport {
    fn new(algorithm: &str) -> Self {
        Self {
            algorithm: algorithm.to_owned(),
            terms: BTreeMap::new(),
        }
    }

    fn set(&mut self, key: &str, v: f64) -> &mut Self {
        self.terms.insert(key.to_owned(), v);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.terms.get(key).copied()
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Subject<'a, T> {
    Sketch(&'a SketchRequest<T>),
    Correlation(&'a CorrelationSpec<T>),
}

/// (R + Q)·(α/ε)·ln(1/δ): cost of estimating Tr(ρA).
pub fn observable_cost(r: f64, q: f64, alpha: f64, eps: f64, delta: f64) -> f64 {
    (r + q) * alpha / eps * (1.0 / delta).ln()
}

/// (1/ε)·ln(1/δ).
fn samples(eps: f64, delta: f64) -> f64 {
    (1.0 / delta).ln() / eps
}

/// x·ln x, the degree scaling of a window of relative width 1/x.
fn xlogx(x: f64) -> f64 {
    x * x.ln()
}

pub fn complexity_report<T: Real>(subject: Subject<'_, T>) -> Result<ComplexityReport> {
    match subject {
        Subject::Correlation(spec) => correlation_report(spec),
        Subject::Sketch(req) => Ok(sketch_report(req)),
    }
}

fn correlation_report<T: Real>(spec: &CorrelationSpec<T>) -> Result<ComplexityReport> {
    check_eps_delta(spec.eps, spec.delta)?;
    let q = spec.hamiltonian.len() as f64;
    let alpha = spec.hamiltonian.scale().to_f64_lossy();
    let acc = spec.evolution_accuracy();
    let mut rep = ComplexityReport::new("correlation");
    let r_sum: f64 = spec.observables.iter().map(|(o, _)| o.len() as f64).sum();
    let gamma: f64 = spec.observables.iter().map(|(o, _)| o.scale().to_f64_lossy()).product();
    let mut t_sum = 0.0;
    let mut t_loose = 0.0;
    for (j, tau) in spec.time_steps().iter().enumerate() {
        let tau = tau.to_f64_lossy();
        let t = evolution_cost(q, alpha, tau, acc)?;
        rep.set(&format!("evolution_{j}"), t);
        t_sum += t;
        t_loose += q * alpha * tau.abs() + q * (1.0 / acc).ln();
    }
    let w = r_sum + t_sum;
    let r = spec.state.cost() as f64;
    rep.set("q", q)
        .set("alpha", alpha)
        .set("evolution_accuracy", acc)
        .set("observable_cost", r_sum)
        .set("gamma", gamma)
        .set("w", w)
        .set("w_loose", r_sum + t_loose)
        .set("state_cost", r)
        .set("samples", samples(spec.eps, spec.delta))
        .set("total", observable_cost(r, w, gamma, spec.eps, spec.delta));
    Ok(rep)
}

fn sketch_report<T: Real>(req: &SketchRequest<T>) -> ComplexityReport {
    let q = req.hamiltonian.len() as f64;
    let d = req.hamiltonian.dim() as f64;
    let (eps, delta, rho) = (req.eps, req.delta, req.rho_max);
    let s = samples(eps, delta);
    let (name, prep) = match &req.kind {
        SketchKind::Dos => ("dos", d.log2()),
        SketchKind::Ldos(st) => ("ldos", st.cost() as f64),
        SketchKind::Response { .. } => ("response", 0.0),
    };
    match (&req.kind, req.mode) {
        (SketchKind::Response { b, c, state }, mode) => {
            let (beta, gamma) = (b.scale().to_f64_lossy(), c.scale().to_f64_lossy());
            let (sb, sc, r) = (b.len() as f64, c.len() as f64, state.cost() as f64);
            let bg = beta * gamma;
            let mut rep = ComplexityReport::new(match mode {
                SketchMode::Integral { .. } => "response_integral",
                SketchMode::Moments(_) => "response_moments",
            });
            rep.set("q", q)
                .set("s_b", sb)
                .set("s_c", sc)
                .set("state_cost", r)
                .set("beta", beta)
                .set("gamma", gamma);
            match mode {
                SketchMode::Integral { .. } => {
                    let deg = xlogx(rho * bg / eps);
                    let (_, n, k) = window_params(req.window_eta());
                    rep.set("degree", deg)
                        .set("window_degree", (n * k) as f64)
                        .set("samples", bg * s)
                        .set("total", (q * deg + sb + sc + r) * bg * s);
                }
                SketchMode::Moments(n) => {
                    let n = n as f64;
                    rep.set("order", n)
                        .set("samples", bg / eps)
                        .set("total", (q * n + sb + sc + r) * bg / eps);
                }
            }
            rep
        }
        (_, SketchMode::Integral { .. }) => {
            let mut rep = ComplexityReport::new(&format!("{name}_integral"));
            let deg = q * xlogx(rho / eps);
            let (_, n, k) = window_params(req.window_eta());
            rep.set("q", q)
                .set("state_cost", prep)
                .set("degree_term", deg)
                .set("window_degree", (n * k) as f64)
                .set("samples", s)
                .set("total", (deg + prep) * s);
            rep
        }
        (_, SketchMode::Moments(n_max)) => {
            let mut rep = ComplexityReport::new(&format!("{name}_moments"));
            let per = |n: usize| (q * n as f64 + prep) * s;
            rep.set("q", q)
                .set("state_cost", prep)
                .set("order", n_max as f64)
                .set("samples", s)
                .set("total", per(n_max))
                .set("total_all_orders", (0..=n_max).map(per).sum());
            rep
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_correlation, oracle_dos_integral};
    use crate::prep::{prepare_basis, prepare_pure};
    use num_complex::Complex64;

    fn ps(pairs: &[(f64, &str)]) -> PauliSum<f64> {
        PauliSum::from_pairs(pairs).unwrap()
    }

    fn corr(h: PauliSum<f64>, obs: Vec<(PauliSum<f64>, f64)>) -> CorrelationSpec<f64> {
        CorrelationSpec {
            hamiltonian: h,
            observables: obs,
            state: prepare_basis(2, 0).unwrap(),
            eps: 0.02,
            delta: 0.05,
        }
    }

    #[test]
    fn time_steps_pad_with_zero() {
        let z = ps(&[(1.0, "Z")]);
        let s = corr(z.clone(), vec![(z.clone(), 0.5), (z.clone(), 1.25), (z, -0.5)]);
        assert_eq!(s.time_steps(), vec![0.5, 0.75, -1.75, 0.5]);
        assert!((s.evolution_accuracy() - 0.02 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn correlate_examples() {
        let z = ps(&[(1.0, "Z")]);
        let x = ps(&[(1.0, "X")]);
        let v = correlate(&corr(z.clone(), vec![(z.clone(), 0.0)]), Mode::Exact, None).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        let s = corr(z.clone(), vec![(x.clone(), std::f64::consts::FRAC_PI_4), (x, 0.0)]);
        let v = correlate(&s, Mode::Exact, None).unwrap();
        assert!((v.value - Complex64::i()).norm() < 1e-7);
        let h = ps(&[(0.7, "Z")]);
        let s = corr(h, vec![(z.clone(), 0.4), (z, -1.1)]);
        let v = correlate(&s, Mode::Exact, None).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!(matches!(correlate(&corr(ps(&[(1.0, "Z")]), vec![]), Mode::Exact, None), Err(Error::EmptyObservables)));
    }

    #[test]
    fn correlate_matches_oracle() {
        let h = ps(&[(0.4, "XZ"), (0.3, "ZI")]);
        let obs = vec![(ps(&[(0.5, "YI"), (0.2, "ZZ")]), 0.7), (ps(&[(1.0, "IX")]), -0.3)];
        let v = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.48), Complex64::new(0.64, 0.0), Complex64::new(0.0, 0.0)];
        let state = prepare_pure(&v).unwrap();
        let spec = CorrelationSpec {
            hamiltonian: h.clone(),
            observables: obs.clone(),
            state: state.clone(),
            eps: 0.05,
            delta: 0.1,
        };
        let got = correlate(&spec, Mode::Exact, None).unwrap().value;
        let want = oracle_correlation(&h, &obs, &state.reduced_density()).unwrap();
        assert!((got - want).norm() < 1e-7, "{got} vs {want}");
    }

    #[test]
    fn dos_moment_examples() {
        let z = ps(&[(1.0, "Z")]);
        let req = SketchRequest::new(z, SketchKind::Dos, SketchMode::Moments(4), 0.05, 0.05);
        let r = dos_sketch(&req, Mode::Exact, None).unwrap();
        let got: Vec<f64> = r.values.iter().map(|v| v.value.re).collect();
        for (n, g) in got.iter().enumerate() {
            assert!((g - if n % 2 == 0 { 1.0 } else { 0.0 }).abs() < 1e-9, "{got:?}");
        }
        assert_eq!(r.chebyshev_orders, vec![0, 1, 2, 3, 4]);

        let x = ps(&[(1.0, "X")]);
        let req = SketchRequest::new(x, SketchKind::Ldos(prepare_basis(2, 0).unwrap()), SketchMode::Moments(1), 0.05, 0.05);
        let r = dos_sketch(&req, Mode::Exact, None).unwrap();
        assert!((r.values[0].value.re - 1.0).abs() < 1e-9);
        assert!(r.values[1].value.re.abs() < 1e-9);
    }

    #[test]
    fn dos_integral_two_levels() {
        let h = ps(&[(0.3, "Z"), (0.2, "X")]);
        let req = SketchRequest::new(h.clone(), SketchKind::Dos, SketchMode::Integral { a: 0.2, b: 0.45 }, 0.15, 0.05);
        let r = dos_sketch(&req, Mode::Exact, None).unwrap();
        let meta = r.window_meta.unwrap();
        assert_eq!((meta.jackson_degree, meta.amplifier_order), (1920, 27));
        let exact = oracle_dos_integral(&h, 0.2, 0.45, None).unwrap();
        assert!((r.values[0].value.re - exact).abs() <= meta.tau + 0.15, "{}", r.values[0].value.re);
        let bad = SketchRequest::new(h, SketchKind::Dos, SketchMode::Integral { a: 0.2, b: 0.6 }, 0.15, 0.05);
        assert!(matches!(dos_sketch(&bad, Mode::Exact, None), Err(Error::BadInterval(_))));
    }

    #[test]
    fn response_moment_examples() {
        let z = ps(&[(1.0, "Z")]);
        let x = ps(&[(1.0, "X")]);
        let kind = SketchKind::Response {
            b: x.clone(),
            c: x,
            state: prepare_basis(2, 0).unwrap(),
        };
        let req = SketchRequest::new(z, kind, SketchMode::Moments(1), 0.05, 0.05);
        let r = response_sketch(&req, Mode::Exact, None).unwrap();
        assert!((r.values[0].value - Complex64::new(1.0, 0.0)).norm() < 1e-7);
        assert!((r.values[1].value - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn kpm_requires_moments() {
        let z = ps(&[(1.0, "Z")]);
        let req = SketchRequest::new(z.clone(), SketchKind::Dos, SketchMode::Integral { a: -0.5, b: 0.5 }, 0.1, 0.1);
        assert!(kpm_sketch(&req, &[0.0], Mode::Exact, None).is_err());
        let req = SketchRequest::new(z, SketchKind::Dos, SketchMode::Moments(0), 0.1, 0.1);
        let (_, f) = kpm_sketch(&req, &[0.0, 0.5], Mode::Exact, None).unwrap();
        let pi = std::f64::consts::PI;
        assert!((f[0] - 1.0 / pi).abs() < 1e-9);
        assert!((f[1] - 1.0 / (pi * 0.75f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn report_examples() {
        let h = ps(&[(0.5, "ZI"), (0.5, "IX")]);
        let req = SketchRequest::new(h.clone(), SketchKind::Dos, SketchMode::Integral { a: -0.5, b: 0.5 }, 0.1, 0.05);
        let rep = complexity_report(Subject::Sketch(&req)).unwrap();
        let deg = 2.0 * 10.0 * 10f64.ln();
        assert!((rep.get("degree_term").unwrap() - deg).abs() < 1e-12);
        assert!((deg - 46.0517).abs() < 1e-4);
        let total = (deg + 2.0) * 10.0 * 20f64.ln();
        assert!((rep.get("total").unwrap() - total).abs() < 1e-9);

        let req = SketchRequest::new(h, SketchKind::Dos, SketchMode::Moments(0), 0.1, 0.05);
        let rep = complexity_report(Subject::Sketch(&req)).unwrap();
        assert!((rep.get("total").unwrap() - 2.0 * 10.0 * 20f64.ln()).abs() < 1e-9);

        let z = ps(&[(1.0, "Z")]);
        let s = corr(z.clone(), vec![(z, 0.0)]);
        let rep = complexity_report(Subject::Correlation(&s)).unwrap();
        assert_eq!(rep.get("evolution_0"), Some(0.0));
        assert_eq!(rep.get("evolution_1"), Some(0.0));
        assert_eq!(rep.get("w"), Some(1.0));
        assert!(rep.get("w").unwrap() <= rep.get("w_loose").unwrap());
    }
}
