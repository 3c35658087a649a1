//! Acceptance criteria 1 through 12. Each test prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsketch::algo::{
    complexity_report, correlate, dos_sketch, kpm_sketch, response_sketch, ComplexityReport, CorrelationSpec,
    SketchKind, SketchMode, SketchRequest, Subject,
};
use qsketch::block::{product_error_bound, BlockEncoding};
use qsketch::cheb::{window_poly, ChebyshevPoly};
use qsketch::estimate::{estimate_observable, QUERY_CONSTANT};
use qsketch::oracle::{oracle_correlation, oracle_dos_integral, oracle_moments, site_weight, uniform_weight};
use qsketch::prep::{
    exact_amplification_params, prepare_basis, prepare_maximally_mixed, prepare_pure, BellAmplification,
    PreparationUnitary,
};
use qsketch::transform::chebyshev_encoding;
use qsketch::{Matrix, Mode, Pauli64};

fn report(n: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {n:>2} {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_pauli_sum(r: &mut ChaCha8Rng, qubits: usize, max_terms: usize) -> Pauli64 {
    let terms = r.random_range(1..=max_terms);
    let words: Vec<String> = (0..terms)
        .map(|_| (0..qubits).map(|_| ['I', 'X', 'Y', 'Z'][r.random_range(0..4)]).collect())
        .collect();
    let pairs: Vec<(f64, &str)> = words
        .iter()
        .map(|w| {
            let c: f64 = r.random_range(0.1..1.0);
            (if r.random_bool(0.5) { c } else { -c }, w.as_str())
        })
        .collect();
    Pauli64::from_pairs(&pairs).unwrap()
}

fn random_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Rank-2 mixed state from a random purification with a qubit purifier.
fn random_mixed(r: &mut ChaCha8Rng, d: usize) -> PreparationUnitary<f64> {
    PreparationUnitary::from_purification(&random_vector(r, 2 * d), d, d as u64).unwrap()
}

fn random_matrix(r: &mut ChaCha8Rng, d: usize) -> Matrix {
    Matrix::from_fn(d, d, |_, _| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

fn with_norm(m: Matrix, norm: f64) -> Matrix {
    let s = m.spectral_norm();
    m.scale_real(norm / s)
}

fn trace_distance(a: &Matrix, b: &Matrix) -> f64 {
    let (vals, _) = (a - b).hermitian_part().eig_hermitian().unwrap();
    0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
}

fn eigenvalues(h: &Pauli64) -> Vec<f64> {
    h.matrix().eig_hermitian().unwrap().0
}

#[test]
fn criterion_01_lcu_correctness() {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let q = r.random_range(1..=3);
        let s = random_pauli_sum(&mut r, q, 4);
        let enc = BlockEncoding::encode_pauli_sum(&s).unwrap();
        let diff = enc.encoded_block().scale_real(enc.scale()).max_abs_diff(&s.matrix());
        worst = worst.max(diff);
    }
    let t = start.elapsed();
    report(
        1,
        "LCU correctness",
        worst <= 1e-9 && t < Duration::from_secs(5),
        format!("max deviation {worst:.2e} over 50 sums, {t:.2?}"),
    );
}

#[test]
fn criterion_02_observable_estimation() {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let q = r.random_range(1..=2);
        let a = random_pauli_sum(&mut r, q, 4);
        let rho = random_mixed(&mut r, a.dim());
        let enc = BlockEncoding::encode_pauli_sum(&a).unwrap();
        let want = rho.reduced_density().matmul(&a.matrix()).trace().re;
        let got = estimate_observable(&enc, &rho, 0.01, 0.05, Mode::Exact, None).unwrap();
        worst = worst.max((got.value.re - want).abs());
    }

    let (eps, delta) = (0.02, 0.1);
    let a = Pauli64::from_pairs(&[(0.4, "XZ"), (0.3, "ZI"), (-0.2, "YY")]).unwrap();
    let rho = random_mixed(&mut r, 4);
    let enc = BlockEncoding::encode_pauli_sum(&a).unwrap();
    let want = rho.reduced_density().matmul(&a.matrix()).trace().re;
    let mut failures = 0;
    let mut over_budget = 0;
    for seed in 0..200 {
        let got = estimate_observable(&enc, &rho, eps, delta, Mode::Sampled, Some(seed)).unwrap();
        if (got.value.re - want).abs() > eps {
            failures += 1;
        }
        let cap = QUERY_CONSTANT / got.amplitude_eps * (1.0 / delta).ln() * got.amplitude_runs as f64;
        if got.grover_queries as f64 > cap || got.grover_queries > got.query_bound() {
            over_budget += 1;
        }
    }
    let frac = failures as f64 / 200.0;
    let t = start.elapsed();
    report(
        2,
        "observable estimation",
        worst <= 1e-8 && frac <= 0.1 + 0.065 && over_budget == 0 && t < Duration::from_secs(120),
        format!(
            "exact max error {worst:.2e}; sampled failure fraction {frac:.3}; {over_budget} runs over C = {QUERY_CONSTANT} budget; {t:.2?}"
        ),
    );
}

#[test]
fn criterion_03_error_composition() {
    let mut r = rng(3);
    let d = 4;
    let mut worst_ratio = 0.0f64;
    for _ in 0..20 {
        let n = r.random_range(2..=4);
        let mut exact = Matrix::identity(d);
        let mut encs = Vec::new();
        let mut errs = Vec::new();
        for _ in 0..n {
            let a = with_norm(random_matrix(&mut r, d), 0.9);
            let e: f64 = r.random_range(1e-3..0.05);
            let noisy = &a + &with_norm(random_matrix(&mut r, d), e);
            encs.push(BlockEncoding::from_contraction(&noisy, 1.0, e, 1).unwrap());
            exact = exact.matmul(&a);
            errs.push(e);
        }
        let prod = BlockEncoding::product(&encs).unwrap();
        let gap = (&prod.encoded_block() - &exact).spectral_norm();
        let bound = product_error_bound(&errs);
        assert!((prod.accuracy() - bound).abs() <= 1e-12);
        worst_ratio = worst_ratio.max(gap / bound);
    }
    let mut uniform_gap = 0.0f64;
    for n in 0..=6 {
        let e0 = 0.01;
        let b = product_error_bound(&vec![e0; n + 1]);
        let sq = ((n + 1) * (n + 1)) as f64 * e0;
        uniform_gap = uniform_gap.max((b - sq).abs() / sq);
    }
    report(
        3,
        "error composition",
        worst_ratio <= 1.0 && uniform_gap <= 1e-12,
        format!("max empirical/bound {worst_ratio:.3} over 20 products; uniform (n+1)^2 relative gap {uniform_gap:.1e}"),
    );
}

#[test]
fn criterion_04_window_polynomial() {
    let cases = [(0.4, 240, 14, 3360), (0.2, 480, 18, 8640), (0.1, 960, 23, 22080)];
    let intervals = [(-0.3, 0.4), (-0.8, -0.2), (0.1, 0.85)];
    let grid: Vec<f64> = (0..=20_000).map(|i| -1.0 + i as f64 / 10_000.0).collect();
    let mut all = true;
    let mut details = Vec::new();
    for (eta, n, k, d) in cases {
        let start = Instant::now();
        let mut worst = 0.0f64;
        for (a, b) in intervals {
            let w = window_poly(a, b, eta).unwrap();
            let kappa = eta / 4.0;
            let tau = (-(k as f64) / 6.0).exp();
            all &= (w.jackson_degree, w.amplifier_order, w.degree()) == (n, k, d);
            all &= (w.tau - tau).abs() < 1e-15 && tau <= eta / 4.0;
            all &= w.certificate.max_violation <= 1e-9;
            for (&x, v) in grid.iter().zip(w.poly.eval_many(&grid)) {
                let mut viol = (v.abs() - 1.0).max(0.0);
                if x >= a && x <= b {
                    viol = viol.max(1.0 - tau - v);
                } else if x < a - kappa || x > b + kappa {
                    viol = viol.max(v - tau).max(-v);
                }
                worst = worst.max(viol);
            }
        }
        let t = start.elapsed();
        all &= worst <= 1e-9 && t < Duration::from_secs(60);
        details.push(format!("eta {eta}: (n,k,d)=({n},{k},{d}) violation {worst:.1e} in {t:.1?}"));
    }
    report(4, "window polynomial", all, details.join("; "));
}

#[test]
fn criterion_05_chebyshev_encodings() {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for d in [4, 8] {
        for _ in 0..3 {
            let a = with_norm(random_matrix(&mut r, d).hermitian_part(), 0.97);
            let enc = BlockEncoding::from_contraction(&a, 1.0, 0.0, 1).unwrap();
            for n in 0..=16 {
                let tn = ChebyshevPoly::<f64>::basis(n);
                let want = a.map_hermitian(|x| Complex64::new(tn.eval(x.clamp(-1.0, 1.0)), 0.0)).unwrap();
                let got = chebyshev_encoding(&enc, n).unwrap().encoded_block();
                worst = worst.max(got.max_abs_diff(&want));
            }
        }
    }
    report(5, "Chebyshev encodings", worst <= 1e-8, format!("max deviation {worst:.2e} for n <= 16, D in {{4, 8}}"));
}

/// |estimate − exact| ≤ τ + (mass within κα of an endpoint) + ε.
fn dos_envelope_excess(h: &Pauli64, a: f64, b: f64, eps: f64) -> (f64, f64) {
    let req = SketchRequest::new(h.clone(), SketchKind::Dos, SketchMode::Integral { a, b }, eps, 0.05)
        .allow_large_window(true);
    let res = dos_sketch(&req, Mode::Exact, None).unwrap();
    let meta = res.window_meta.unwrap();
    let alpha = h.scale();
    let eigs = eigenvalues(h);
    let reach = meta.kappa * alpha;
    let strip = eigs
        .iter()
        .filter(|&&e| (e - a).abs() <= reach || (e - b).abs() <= reach)
        .count() as f64
        / eigs.len() as f64;
    let exact = oracle_dos_integral(h, a, b, None).unwrap();
    let est = res.values[0].value.re;
    ((est - exact).abs() - (meta.tau + strip + eps), est)
}

#[test]
fn criterion_06_dos_integral() {
    let eps = 0.05;
    let mut r = rng(6);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..25 {
        let q = r.random_range(1..=3);
        let h = random_pauli_sum(&mut r, q, 4);
        let alpha = h.scale();
        let a_bar: f64 = r.random_range(-0.9..0.7);
        let b_bar: f64 = r.random_range(a_bar + 0.05..0.9);
        worst = worst.max(dos_envelope_excess(&h, a_bar * alpha, b_bar * alpha, eps).0);
    }
    let h = Pauli64::from_pairs(&[(0.3, "Z"), (0.2, "X")]).unwrap();
    let (excess, est) = dos_envelope_excess(&h, 0.2, 0.45, eps);
    report(
        6,
        "DOS integral",
        worst <= 0.0 && excess <= 0.0,
        format!("max excess over tau + strip + eps {worst:.3e} on 25 instances; 0.3Z+0.2X on [0.2, 0.45] gives {est:.6}"),
    );
}

#[test]
fn criterion_07_moments() {
    let mut r = rng(7);
    let n_max = 64;
    let mut worst = 0.0f64;
    for i in 0..6 {
        let q = r.random_range(1..=3);
        let h = random_pauli_sum(&mut r, q, 4);
        let d = h.dim();
        let (kind, weight) = if i % 2 == 0 {
            (SketchKind::Dos, uniform_weight(d))
        } else {
            let v = random_vector(&mut r, d);
            (SketchKind::Ldos(prepare_pure(&v).unwrap()), site_weight(&v))
        };
        let req = SketchRequest::new(h.clone(), kind, SketchMode::Moments(n_max), 0.05, 0.05);
        let got = dos_sketch(&req, Mode::Exact, None).unwrap();
        let want = oracle_moments(&h, h.scale(), n_max, &weight).unwrap();
        for (g, w) in got.values.iter().zip(&want) {
            worst = worst.max((g.value.re - w).abs());
        }
    }
    let z = Pauli64::from_pairs(&[(1.0, "Z")]).unwrap();
    let req = SketchRequest::new(z, SketchKind::Dos, SketchMode::Moments(n_max), 0.05, 0.05);
    let got = dos_sketch(&req, Mode::Exact, None).unwrap();
    let z_dev = got
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| (v.value.re - if n % 2 == 0 { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    report(
        7,
        "DOS/LDOS moments",
        worst <= 1e-7 && z_dev <= 1e-9,
        format!("max oracle deviation {worst:.2e} for n <= {n_max}; H = Z deviation {z_dev:.2e}"),
    );
}

#[test]
fn criterion_08_correlation() {
    let z = Pauli64::from_pairs(&[(1.0, "Z")]).unwrap();
    let x = Pauli64::from_pairs(&[(1.0, "X")]).unwrap();
    let mut spec = CorrelationSpec {
        hamiltonian: z,
        observables: vec![(x.clone(), std::f64::consts::FRAC_PI_4), (x, 0.0)],
        state: prepare_basis(2, 0).unwrap(),
        eps: 0.02,
        delta: 0.05,
    };
    let exact_dev = (correlate(&spec, Mode::Exact, None).unwrap().value - Complex64::i()).norm();
    let eps = spec.eps;
    spec.delta = 0.1;
    let hits = (0..100)
        .filter(|&s| {
            let v = correlate(&spec, Mode::Sampled, Some(s)).unwrap().value;
            v.re.abs() <= eps && (v.im - 1.0).abs() <= eps
        })
        .count();

    let mut r = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let q = r.random_range(1..=2);
        let h = random_pauli_sum(&mut r, q, 3);
        let n = r.random_range(1..=3);
        let obs: Vec<(Pauli64, f64)> = (0..n)
            .map(|_| (random_pauli_sum(&mut r, q, 2), r.random_range(-1.5..1.5)))
            .collect();
        let state = random_mixed(&mut r, h.dim());
        let spec = CorrelationSpec {
            hamiltonian: h.clone(),
            observables: obs.clone(),
            state: state.clone(),
            eps: 0.05,
            delta: 0.05,
        };
        let got = correlate(&spec, Mode::Exact, None).unwrap().value;
        let want = oracle_correlation(&h, &obs, &state.reduced_density()).unwrap();
        worst = worst.max((got - want).norm());
    }
    report(
        8,
        "correlation functions",
        exact_dev <= 1e-7 && hits >= 90 && worst <= 1e-6,
        format!("<X(pi/4)X> exact deviation {exact_dev:.2e}; sampled {hits}/100 within eps; random max deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_09_linear_response() {
    let z = Pauli64::from_pairs(&[(1.0, "Z")]).unwrap();
    let x = Pauli64::from_pairs(&[(1.0, "X")]).unwrap();
    let kind = SketchKind::Response {
        b: x.clone(),
        c: x,
        state: prepare_basis(2, 0).unwrap(),
    };
    let req = SketchRequest::new(z, kind, SketchMode::Moments(1), 0.05, 0.05);
    let res = response_sketch(&req, Mode::Exact, None).unwrap();
    let dev = (res.values[0].value - Complex64::new(1.0, 0.0))
        .norm()
        .max((res.values[1].value - Complex64::new(-1.0, 0.0)).norm());

    let eps = 0.1;
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let q = r.random_range(1..=2);
        let h = random_pauli_sum(&mut r, q, 3);
        let alpha = h.scale();
        let mode = if i % 2 == 0 {
            SketchMode::Moments(6)
        } else {
            let a: f64 = r.random_range(-0.8..0.2);
            SketchMode::Integral { a: a * alpha, b: (a + 0.5) * alpha }
        };
        let id = Pauli64::identity(q);
        let resp_kind = SketchKind::Response {
            b: id.clone(),
            c: id,
            state: prepare_maximally_mixed(h.dim()).unwrap(),
        };
        let resp = response_sketch(&SketchRequest::new(h.clone(), resp_kind, mode, eps, 0.05), Mode::Exact, None).unwrap();
        let dos = dos_sketch(&SketchRequest::new(h, SketchKind::Dos, mode, eps, 0.05), Mode::Exact, None).unwrap();
        for (a, b) in resp.values.iter().zip(&dos.values) {
            worst = worst.max((a.value - b.value).norm());
        }
    }
    report(
        9,
        "linear response",
        dev <= 1e-7 && worst <= 2.0 * eps,
        format!("B=C=X moments deviation {dev:.2e}; B=C=I vs DOS max gap {worst:.2e} (limit {})", 2.0 * eps),
    );
}

#[test]
fn criterion_10_maximally_mixed() {
    let mut worst_td = 0.0f64;
    let mut worst_sin = 0.0f64;
    for d in 2..=16usize {
        let rho = prepare_maximally_mixed::<f64>(d).unwrap().reduced_density();
        worst_td = worst_td.max(trace_distance(&rho, &uniform_weight(d)));
        let n = d.next_power_of_two();
        let beta = (d as f64 / n as f64).sqrt();
        let (k, gamma) = exact_amplification_params(beta).unwrap();
        let amp = BellAmplification::<f64>::new(d).unwrap();
        assert_eq!((amp.rounds, amp.gamma), (k, gamma));
        let s = (((2 * k + 1) as f64) * (gamma * beta).asin()).sin();
        worst_sin = worst_sin.max((s - 1.0).abs());
    }
    report(
        10,
        "exact maximally mixed preparation",
        worst_td <= 1e-9 && worst_sin <= 1e-12,
        format!("max trace distance {worst_td:.2e}; max |sin((2k+1)asin(gamma beta)) - 1| {worst_sin:.1e} for D in 2..=16"),
    );
}

fn golden(name: &str) -> Vec<ComplexityReport> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| ComplexityReport {
            algorithm: r["algorithm"].as_str().unwrap().to_owned(),
            terms: r["terms"]
                .as_object()
                .unwrap()
                .iter()
                .map(|(k, v)| (k.clone(), v.as_f64().unwrap()))
                .collect(),
        })
        .collect()
}

fn report_gap(got: &ComplexityReport, want: &ComplexityReport) -> f64 {
    if got.algorithm != want.algorithm || got.terms.keys().ne(want.terms.keys()) {
        return f64::INFINITY;
    }
    got.terms
        .iter()
        .map(|(k, v)| (v - want.terms[k]).abs() / want.terms[k].abs().max(1.0))
        .fold(0.0, f64::max)
}

#[test]
fn criterion_11_cost_ledger() {
    let h = Pauli64::from_pairs(&[(0.5, "ZI"), (0.5, "IX")]).unwrap();
    let dos = SketchRequest::new(h.clone(), SketchKind::Dos, SketchMode::Integral { a: -0.5, b: 0.5 }, 0.1, 0.05);

    let corr = CorrelationSpec {
        hamiltonian: Pauli64::from_pairs(&[(0.6, "Z"), (0.9, "X")]).unwrap(),
        observables: vec![
            (Pauli64::from_pairs(&[(0.5, "X"), (0.5, "Z")]).unwrap(), 0.4),
            (Pauli64::from_pairs(&[(1.0, "Y")]).unwrap(), -0.3),
        ],
        state: prepare_basis(2, 0).unwrap(),
        eps: 0.1,
        delta: 0.05,
    };

    let kind = SketchKind::Response {
        b: Pauli64::from_pairs(&[(0.5, "XI"), (0.5, "YZ")]).unwrap(),
        c: Pauli64::from_pairs(&[(2.0, "ZZ")]).unwrap(),
        state: prepare_basis(4, 0).unwrap(),
    };
    let resp_int = SketchRequest::new(h.clone(), kind.clone(), SketchMode::Integral { a: -0.5, b: 0.5 }, 0.2, 0.1);
    let resp_mom = SketchRequest::new(h, kind, SketchMode::Moments(3), 0.2, 0.1);

    let fixtures = [
        ("dos_integral.json", vec![complexity_report(Subject::Sketch(&dos)).unwrap()]),
        ("correlation.json", vec![complexity_report(Subject::Correlation(&corr)).unwrap()]),
        (
            "response.json",
            vec![
                complexity_report(Subject::Sketch(&resp_int)).unwrap(),
                complexity_report(Subject::Sketch(&resp_mom)).unwrap(),
            ],
        ),
    ];
    let mut worst = 0.0f64;
    for (file, got) in &fixtures {
        let want = golden(file);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max(report_gap(g, w));
        }
    }
    let w_ok = {
        let rep = &fixtures[1].1[0];
        rep.get("w").unwrap() <= rep.get("w_loose").unwrap()
    };
    report(
        11,
        "cost ledger",
        worst <= 1e-9 && w_ok,
        format!("max relative deviation from golden JSON {worst:.1e} over 3 fixtures"),
    );
}

#[test]
fn criterion_12_kpm_sketch() {
    let z = Pauli64::from_pairs(&[(1.0, "Z")]).unwrap();
    let req = SketchRequest::new(z, SketchKind::Dos, SketchMode::Moments(32), 0.05, 0.05);
    let grid: Vec<f64> = (0..1999).map(|i| -0.999 + i as f64 * 0.001).collect();
    let (_, f) = kpm_sketch(&req, &grid, Mode::Exact, None).unwrap();
    let asym = (0..grid.len())
        .map(|i| (f[i] - f[grid.len() - 1 - i]).abs())
        .fold(0.0, f64::max);
    let mut peaks: Vec<(f64, f64)> = (1..grid.len() - 1)
        .filter(|&i| f[i] >= f[i - 1] && f[i] >= f[i + 1])
        .map(|i| (f[i], grid[i]))
        .collect();
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    let top: Vec<f64> = peaks.iter().take(2).map(|p| p.1).collect();
    report(
        12,
        "KPM sketch",
        asym <= 1e-6 && top.len() == 2 && top.iter().all(|x| x.abs() > 0.9),
        format!("max asymmetry {asym:.2e}; two largest peaks at x = {top:?}"),
    );
}
