//! Amplitude estimation (simulated) and trace estimation for block-encoded
//! observables against prepared states.

use std::fmt;
use std::str::FromStr;

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use serde::{Serialize, Serializer};

use crate::block::{imag_unit, BlockEncoding};
use crate::error::{Error, Result};
use crate::linalg::{inner, vector_norm, ComplexMatrix};
use crate::prep::PreparationUnitary;
use crate::scalar::{cr, Real, C};

/// Constant C in the query cap C·(1/ε)·ln(1/min(δ, 1/2)).
pub const QUERY_CONSTANT: f64 = 200.0;
/// Shots per Chernoff–Hoeffding round, in units of ln(2/δᵢ).
const SHOT_FACTOR: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            other => Err(Error::OutOfRange(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimationResult {
    pub value: Complex64,
    pub target_eps: f64,
    pub delta: f64,
    /// Precision requested from the underlying amplitude estimator.
    pub amplitude_eps: f64,
    pub grover_queries: u64,
    /// Number of amplitude-estimation runs summed into `grover_queries`.
    pub amplitude_runs: u32,
    pub mode: Mode,
    pub seed: Option<u64>,
}

impl EstimationResult {
    pub fn confidence(&self) -> f64 {
        1.0 - self.delta
    }

    /// C·(1/amplitude_eps)·ln(1/min(δ, 1/2)) per amplitude run.
    pub fn query_bound(&self) -> u64 {
        self.amplitude_runs as u64 * query_budget(self.amplitude_eps, self.delta)
    }
}

impl Serialize for EstimationResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record {
            value_re: f64,
            value_im: f64,
            eps: f64,
            delta: f64,
            grover_queries: u64,
            mode: Mode,
            seed: Option<u64>,
        }
        Record {
            value_re: self.value.re,
            value_im: self.value.im,
            eps: self.target_eps,
            delta: self.delta,
            grover_queries: self.grover_queries,
            mode: self.mode,
            seed: self.seed,
        }
        .serialize(s)
    }
}

/// Π as a dense matrix or as |φ⟩⟨φ| for a unit vector φ.
#[derive(Clone, Debug, PartialEq)]
pub enum Projector<T> {
    Dense(ComplexMatrix<T>),
    Rank1(Vec<C<T>>),
}

impl<T: Real> Projector<T> {
    pub fn dim(&self) -> usize {
        match self {
            Projector::Dense(m) => m.rows(),
            Projector::Rank1(v) => v.len(),
        }
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        match self {
            Projector::Dense(m) => m.matvec(v),
            Projector::Rank1(phi) => {
                let c = inner(phi, v);
                phi.iter().map(|&x| x * c).collect()
            }
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        match self {
            Projector::Dense(m) => m.clone(),
            Projector::Rank1(phi) => ComplexMatrix::outer(phi, phi),
        }
    }
}

/// Estimate |Π|Ψ⟩|.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeProblem<T> {
    psi: Vec<C<T>>,
    projector: Projector<T>,
}

impl<T: Real> AmplitudeProblem<T> {
    pub fn new(psi: Vec<C<T>>, projector: Projector<T>) -> Result<Self> {
        if projector.dim() != psi.len() {
            return Err(Error::InvalidProjector(format!(
                "projector dimension {} does not match state length {}",
                projector.dim(),
                psi.len()
            )));
        }
        let norm = vector_norm(&psi);
        if (norm - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::NotNormalized { norm: norm.to_f64_lossy() });
        }
        match &projector {
            Projector::Dense(m) => {
                let herm = m.hermitian_deviation();
                if herm > T::lit(1e-10) {
                    return Err(Error::InvalidProjector(format!("not Hermitian (deviation {herm})")));
                }
                let idem = m.matmul(m).max_abs_diff(m);
                if idem > T::lit(1e-9) {
                    return Err(Error::InvalidProjector(format!("not idempotent (deviation {idem})")));
                }
            }
            Projector::Rank1(phi) => {
                let n = vector_norm(phi);
                if (n - T::one()).abs() > T::lit(1e-9) {
                    return Err(Error::InvalidProjector(format!("rank-one vector has norm {n}")));
                }
            }
        }
        Ok(Self { psi, projector })
    }

    pub fn psi(&self) -> &[C<T>] {
        &self.psi
    }

    pub fn projector(&self) -> &Projector<T> {
        &self.projector
    }

    pub fn true_amplitude(&self) -> T {
        vector_norm(&self.projector.apply(&self.psi)).min(T::one())
    }
}

/// G = −(I − 2Π)(I − 2|Ψ⟩⟨Ψ|).
pub fn grover_operator<T: Real>(p: &AmplitudeProblem<T>) -> ComplexMatrix<T> {
    let n = p.psi.len();
    let two = cr(T::lit(2.0));
    let id = ComplexMatrix::identity(n);
    let refl_pi = &id - &p.projector.to_matrix().scale(two);
    let refl_psi = &id - &ComplexMatrix::outer(&p.psi, &p.psi).scale(two);
    refl_pi.matmul(&refl_psi).scale(-C::<T>::one())
}

/// ⌈C·(1/ε)·ln(1/min(δ, 1/2))⌉.
pub fn query_budget(eps: f64, delta: f64) -> u64 {
    (QUERY_CONSTANT / eps * (1.0 / delta.min(0.5)).ln()).ceil() as u64
}

fn check_eps_delta(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange(format!("eps and delta must lie in (0,1), got eps={eps}, delta={delta}")));
    }
    Ok(())
}

/// Exact mode returns the true amplitude and reports the query cap. Sampled
/// mode runs iterative amplitude estimation on simulated Grover-power
/// outcomes drawn with probability sin²((2k+1)θ).
pub fn estimate_amplitude<T: Real>(
    p: &AmplitudeProblem<T>,
    eps: f64,
    delta: f64,
    mode: Mode,
    seed: Option<u64>,
) -> Result<EstimationResult> {
    check_eps_delta(eps, delta)?;
    let a = p.true_amplitude().to_f64_lossy();
    let (value, queries) = match mode {
        Mode::Exact => (a, query_budget(eps, delta)),
        Mode::Sampled => iterative_estimate(a, eps, delta, seed.unwrap_or(0)),
    };
    Ok(EstimationResult {
        value: Complex::new(value, 0.0),
        target_eps: eps,
        delta,
        amplitude_eps: eps,
        grover_queries: queries,
        amplitude_runs: 1,
        mode,
        seed: if mode == Mode::Sampled { Some(seed.unwrap_or(0)) } else { seed },
    })
}

/// Interval-shrinking estimate of θ = arcsin(a) from Chernoff–Hoeffding
/// intervals at Grover powers k with 4k + 2 at least doubling.
fn iterative_estimate(a: f64, eps: f64, delta: f64, seed: u64) -> (f64, u64) {
    use std::f64::consts::PI;
    let theta = a.clamp(0.0, 1.0).asin();
    let d = delta.min(0.5);
    let cap = query_budget(eps, delta);
    let stages = ((PI / (4.0 * eps)).log2().ceil() as i32).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lo, mut hi) = (0.0f64, PI / 2.0);
    let mut k = 0u64;
    let (mut ones, mut shots) = (0u64, 0u64);
    let mut queries = 0u64;
    let mut round = 0i32;
    while hi - lo > 2.0 * eps {
        let next = next_power(k, lo, hi);
        if next != k {
            k = next;
            ones = 0;
            shots = 0;
        }
        // Per-round confidence: geometric toward the final rounds, with a
        // geometric tail for rounds beyond the planned count.
        let round_delta = if round <= stages {
            d * 2f64.powi(round - stages - 1)
        } else {
            d * 2f64.powi(-stages - 1) * 2f64.powi(stages - round)
        };
        let log_term = (2.0 / round_delta).ln();
        let n = (SHOT_FACTOR * log_term).ceil() as u64;
        let spend = n.saturating_mul(k);
        if queries.saturating_add(spend) > cap {
            break;
        }
        queries += spend;
        let prob = ((2 * k + 1) as f64 * theta).sin().powi(2).clamp(0.0, 1.0);
        ones += rng.sample(Binomial::new(n, prob).expect("valid binomial"));
        shots += n;
        let p_hat = ones as f64 / shots as f64;
        let half_width = (log_term / (2.0 * shots as f64)).sqrt();
        let (p_lo, p_hi) = ((p_hat - half_width).max(0.0), (p_hat + half_width).min(1.0));
        let big_k = (4 * k + 2) as f64;
        let m = (big_k * lo / PI).floor();
        let (y_lo, y_hi) = if m as i64 % 2 == 0 {
            ((1.0 - 2.0 * p_lo).acos(), (1.0 - 2.0 * p_hi).acos())
        } else {
            (PI - (1.0 - 2.0 * p_hi).acos(), PI - (1.0 - 2.0 * p_lo).acos())
        };
        let new_lo = (m * PI + y_lo) / big_k;
        let new_hi = (m * PI + y_hi) / big_k;
        let (l, h) = (lo.max(new_lo), hi.min(new_hi));
        // An empty intersection means an interval failed; keep the fresher one.
        if l <= h {
            lo = l;
            hi = h;
        } else {
            lo = new_lo;
            hi = new_hi;
        }
        round += 1;
    }
    (((lo + hi) / 2.0).sin(), queries)
}

/// Largest k' with K' = 4k' + 2 ≥ 2(4k + 2) such that K'·[lo, hi] lies in
/// one half-period of cos; otherwise k.
fn next_power(k: u64, lo: f64, hi: f64) -> u64 {
    use std::f64::consts::PI;
    let current = 4 * k + 2;
    let width = hi - lo;
    if width <= 0.0 {
        return k;
    }
    let kmax = (PI / width).floor().min(1e15) as u64;
    if kmax < 2 {
        return k;
    }
    let mut cand = kmax - (kmax - 2) % 4;
    while cand >= 2 * current {
        let a = cand as f64 * lo / PI;
        let b = cand as f64 * hi / PI;
        if a.floor() == b.floor() || b == a.floor() + 1.0 {
            return (cand - 2) / 4;
        }
        cand -= 4;
    }
    k
}

/// Tr(ρA) for Hermitian A = scale × block, via the shifted encoding
/// (I + block)/2 and amplitude estimation of |⟨0,ρ|(U ⊗ I)|0,ρ⟩|.
pub fn estimate_observable<T: Real>(
    a: &BlockEncoding<T>,
    rho: &PreparationUnitary<T>,
    eps: f64,
    delta: f64,
    mode: Mode,
    seed: Option<u64>,
) -> Result<EstimationResult> {
    check_eps_delta(eps, delta)?;
    let block = a.encoded_block();
    let dev = block.hermitian_deviation();
    if dev > T::lit(1e-8) {
        return Err(Error::NotHermitian { deviation: dev.to_f64_lossy() });
    }
    if a.system_dim() != rho.system_dim() {
        return Err(Error::DimensionMismatch(format!(
            "observable acts on dimension {}, state on {}",
            a.system_dim(),
            rho.system_dim()
        )));
    }
    let alpha = a.scale().to_f64_lossy();
    let half = cr(T::lit(0.5));
    let shifted = BlockEncoding::linear_combine(
        &[half, half],
        &[BlockEncoding::identity(a.system_dim()), a.clone().with_scale(T::one())],
    )?;
    let (psi, phi) = shifted_state(&shifted, rho);
    let problem = AmplitudeProblem::new(psi, Projector::Rank1(phi))?;
    let amp_eps = (eps / (2.0 * alpha)).min(0.5);
    let r = estimate_amplitude(&problem, amp_eps, delta, mode, seed)?;
    Ok(EstimationResult {
        value: Complex::new((2.0 * r.value.re - 1.0) * alpha, 0.0),
        target_eps: eps,
        amplitude_eps: amp_eps,
        ..r
    })
}

/// |Ψ⟩ = (U ⊗ I)|0⟩|ρ⟩ and |φ⟩ = |0⟩|ρ⟩ in ancilla ⊗ system ⊗ purifier order.
fn shifted_state<T: Real>(u: &BlockEncoding<T>, rho: &PreparationUnitary<T>) -> (Vec<C<T>>, Vec<C<T>>) {
    let d = u.system_dim();
    let rows = u.total_dim();
    let cols = u.unitary().submatrix(0, 0, rows, d);
    let psi = cols.matmul(&rho.state_matrix()).as_slice().to_vec();
    let mut phi = vec![C::zero(); psi.len()];
    let state = rho.state();
    phi[..state.len()].copy_from_slice(&state);
    (psi, phi)
}

/// Tr(ρΓ) for general Γ from its Hermitian and anti-Hermitian parts, each to
/// precision `eps`.
pub fn estimate_complex<T: Real>(
    g: &BlockEncoding<T>,
    rho: &PreparationUnitary<T>,
    eps: f64,
    delta: f64,
    mode: Mode,
    seed: Option<u64>,
) -> Result<EstimationResult> {
    check_eps_delta(eps, delta)?;
    let half = cr(T::lit(0.5));
    let i = imag_unit::<T>();
    let pair = [g.clone(), g.adjoint()];
    let herm = BlockEncoding::linear_combine(&[half, half], &pair)?;
    let anti = BlockEncoding::linear_combine(&[-i * half, i * half], &pair)?;
    let re = estimate_observable(&herm, rho, eps, delta, mode, seed)?;
    let im = estimate_observable(&anti, rho, eps, delta, mode, seed.map(|s| s ^ 0x9e37_79b9_7f4a_7c15))?;
    Ok(EstimationResult {
        value: Complex::new(re.value.re, im.value.re),
        grover_queries: re.grover_queries + im.grover_queries,
        amplitude_runs: re.amplitude_runs + im.amplitude_runs,
        ..re
    })
}
