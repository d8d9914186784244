//! Command-line dispatch: every computation in the library exposed as a
//! subcommand with seeded, machine-readable [`Report`] output.
//!
//! Subcommands: `wg`, `moment`, `sym`, `certify`, `tpe`, `twirl`,
//! `fidelity`, `purity`, `barren`, `tails`, `shadow`. Exit codes: `0` on
//! success, `1` on a computation error, `2` on a usage error. Reports for
//! the same arguments and seed are byte-identical (timestamp excluded)
//! regardless of `--threads`, because all Monte-Carlo loops draw from
//! per-index substreams and reduce over fixed chunk boundaries.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::applications::{
    average_gate_fidelity, barren_plateau_experiment, entanglement_fidelity, expected_purity,
    page_entropy, tail_check, twirl_apply_exact, twirl_depolarizing_parameter, BarrenConfig,
    ChannelKraus, TailKind,
};
use crate::core_linalg::{c64, kron, kron_power, partial_trace, CMat, SubsystemDims};
use crate::designs::{
    amplify, certify_design, design_cardinality_lower_bound, tpe_norm_exact, CertifyMode,
    EXACT_DESIGN_TOL,
};
use crate::ensembles::{
    pauli_matrices_1q, sample_haar_state, sample_haar_unitary, FiniteEnsemble, RandomStream,
    UnitaryEnsemble,
};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::shadows::{estimate_observables, shadow_variance, VarianceMode};
use crate::stats::mean_and_std_error;
use crate::subspaces::{asym_dim, haar_state_moment, p_asym, p_sym, sym_dim};
use crate::weingarten::{moment_apply_exact, weingarten_table, PINV_REL_CUTOFF};

/// Fixed chunk count for deterministic parallel Monte-Carlo reductions:
/// chunk boundaries depend only on the sample count, so the summation
/// order — and therefore the report bytes — is thread-count independent.
const MC_CHUNKS: usize = 128;

/// Exact and Monte-Carlo moments of the Haar measure on U(d), unitary
/// k-design certification, twirling, concentration checks, and
/// classical-shadow tomography. Every subcommand writes a versioned JSON
/// report that fully echoes its configuration.
#[derive(Debug, Parser)]
#[command(name = "haar-toolkit", version)]
pub struct Cli {
    /// RNG seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker thread count (fallback: HAAR_TOOLKIT_THREADS, then all cores).
    /// Results never depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

/// One subcommand per capability.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weingarten coefficient table for moment order k at dimension d.
    Wg {
        /// Moment order.
        #[arg(long)]
        k: usize,
        /// Hilbert-space dimension.
        #[arg(long)]
        d: usize,
    },
    /// Exact k-th Haar moment of an observable, with optional MC cross-check.
    Moment {
        /// Moment order.
        #[arg(long)]
        k: usize,
        /// Local dimension (the observable lives on d^k).
        #[arg(long)]
        d: usize,
        /// Matrix file holding the d^k × d^k observable.
        #[arg(long)]
        observable: PathBuf,
        /// Haar samples for a Monte-Carlo cross-check.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Symmetric-subspace dimensions and projector identities.
    Sym {
        /// Tensor-power order.
        #[arg(long)]
        k: usize,
        /// Local dimension.
        #[arg(long)]
        d: usize,
    },
    /// Certify an ensemble as a unitary k-design via its frame potential.
    Certify {
        /// Built-in name (haar, pauli1, clifford1, cliffordN) or a manifest path.
        #[arg(long)]
        ensemble: String,
        /// Moment order.
        #[arg(long)]
        k: usize,
        /// Dimension (required for the haar built-in).
        #[arg(long)]
        d: Option<usize>,
        /// Qubit count (required for the cliffordN built-in).
        #[arg(long)]
        n: Option<usize>,
        /// Frame-potential evaluation: exact or mc.
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Independent (U, V) pairs in mc mode.
        #[arg(long, default_value_t = 20000)]
        samples: usize,
        /// Frame-potential gap tolerance for the pass/fail diagnostic.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Exact tensor-product-expander norms under product amplification.
    Tpe {
        /// Built-in name (haar, pauli1, clifford1, cliffordN) or a manifest path.
        #[arg(long)]
        ensemble: String,
        /// Moment order.
        #[arg(long)]
        k: usize,
        /// Dimension (required for the haar built-in).
        #[arg(long)]
        d: Option<usize>,
        /// Qubit count (required for the cliffordN built-in).
        #[arg(long)]
        n: Option<usize>,
        /// Largest product power P to evaluate.
        #[arg(long, default_value_t = 4)]
        power: usize,
    },
    /// Exact twirl of a seeded random channel onto depolarizing form.
    Twirl {
        /// Channel dimension.
        #[arg(long)]
        d: usize,
        /// Environment dimension of the random Stinespring channel.
        #[arg(long)]
        env: Option<usize>,
        /// Haar samples for a Monte-Carlo cross-check.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Entanglement and average gate fidelity of a channel.
    Fidelity {
        /// Channel dimension.
        #[arg(long)]
        d: usize,
        /// Depolarizing parameter in [0, 1]; omit for a seeded random channel.
        #[arg(long)]
        p: Option<f64>,
        /// Environment dimension of the random channel.
        #[arg(long)]
        env: Option<usize>,
    },
    /// Haar-expected subsystem purity and Page entropy.
    Purity {
        /// Dimension of the kept subsystem A.
        #[arg(long = "dA")]
        d_a: usize,
        /// Dimension of the traced-out subsystem B.
        #[arg(long = "dB")]
        d_b: usize,
        /// Haar states for a Monte-Carlo cross-check.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Barren-plateau cost and gradient variance experiment.
    Barren {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Monte-Carlo samples per statistic.
        #[arg(long, default_value_t = 20000)]
        samples: usize,
    },
    /// Empirical concentration-tail check against an analytic bound.
    Tails {
        /// Bound to check: markov_pauli, levy, or exp_overlap.
        #[arg(long)]
        kind: String,
        /// Qubit count (markov_pauli).
        #[arg(long)]
        n: Option<usize>,
        /// Dimension (levy, exp_overlap).
        #[arg(long)]
        d: Option<usize>,
        /// Deviation threshold ε.
        #[arg(long)]
        epsilon: f64,
        /// Haar states to sample.
        #[arg(long, default_value_t = 20000)]
        samples: usize,
    },
    /// Classical-shadow estimation over the global Clifford ensemble.
    Shadow {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Snapshots to collect.
        #[arg(long, default_value_t = 10000)]
        samples: usize,
        /// Median-of-means batches.
        #[arg(long, default_value_t = 10)]
        batches: usize,
        /// Matrix file for the observable (default: Z on qubit 0).
        #[arg(long)]
        observable: Option<PathBuf>,
        /// Matrix file for the state (default: |0…0⟩⟨0…0|).
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

/// A dispatch failure, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments: exit 2 with a hint on stderr.
    Usage(String),
    /// The computation itself failed: exit 1.
    Computation(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Computation(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Computation(e) => write!(f, "error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses argv, honors the thread settings, runs the subcommand, and
/// writes the report; returns the process exit code.
pub fn run_main() -> i32 {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("HAAR_TOOLKIT_THREADS").ok().and_then(|v| v.parse().ok()));
    let execute = || match run(&cli) {
        Ok(report) => {
            let text = report.render();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: failed to write report to {}: {e}", path.display());
                        return 1;
                    }
                    eprintln!("report written to {}", path.display());
                }
                None => print!("{text}"),
            }
            0
        }
        Err(err @ CliError::Usage(_)) => {
            eprintln!("{err}");
            eprintln!("run `haar-toolkit --help` for usage");
            2
        }
        Err(err) => {
            eprintln!("{err}");
            1
        }
    };
    match threads {
        Some(0) => {
            eprintln!("usage error: --threads must be at least 1");
            2
        }
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(execute),
            Err(e) => {
                eprintln!("error: could not build a {t}-thread pool: {e}");
                1
            }
        },
        None => execute(),
    }
}

/// Runs one parsed invocation and assembles its report.
pub fn run(cli: &Cli) -> CliResult<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Wg { k, d } => run_wg(*k, *d),
        Command::Moment { k, d, observable, samples } => {
            run_moment(*k, *d, observable, *samples, seed)
        }
        Command::Sym { k, d } => run_sym(*k, *d),
        Command::Certify { ensemble, k, d, n, mode, samples, tol } => {
            run_certify(ensemble, *k, *d, *n, mode, *samples, *tol, seed)
        }
        Command::Tpe { ensemble, k, d, n, power } => run_tpe(ensemble, *k, *d, *n, *power),
        Command::Twirl { d, env, samples } => run_twirl(*d, *env, *samples, seed),
        Command::Fidelity { d, p, env } => run_fidelity(*d, *p, *env, seed),
        Command::Purity { d_a, d_b, samples } => run_purity(*d_a, *d_b, *samples, seed),
        Command::Barren { n, samples } => run_barren(*n, *samples, seed),
        Command::Tails { kind, n, d, epsilon, samples } => {
            run_tails(kind, *n, *d, *epsilon, *samples, seed)
        }
        Command::Shadow { n, samples, batches, observable, state } => {
            run_shadow(*n, *samples, *batches, observable.as_deref(), state.as_deref(), seed)
        }
    }
}

/// Serializes one of the library's report types into a JSON value.
fn value_of<T: Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| {
        CliError::Computation(Error::Numerical(format!(
            "results contain a non-serializable numeric value: {e}"
        )))
    })
}

/// Embeds a matrix into a report as its matrix-file JSON object.
fn matrix_value(m: &CMat) -> CliResult<Value> {
    serde_json::from_str(&m.to_matrix_json()).map_err(|e| {
        CliError::Computation(Error::Numerical(format!(
            "matrix contains a non-serializable value: {e}"
        )))
    })
}

/// Loads a matrix input file, classifying a missing path as a usage error
/// and malformed content as a computation error.
fn load_matrix_arg(path: &Path, what: &str) -> CliResult<CMat> {
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "{what} file {} does not exist",
            path.display()
        )));
    }
    Ok(CMat::load(path)?)
}

/// Resolves an `--ensemble` argument: a built-in name or a manifest path.
fn resolve_ensemble(
    name: &str,
    d: Option<usize>,
    n: Option<usize>,
) -> CliResult<(UnitaryEnsemble, Value)> {
    match name {
        "haar" => {
            let d = d.ok_or_else(|| {
                CliError::Usage("--d is required for the haar ensemble".into())
            })?;
            Ok((UnitaryEnsemble::Haar(d), json!({"name": "haar", "d": d})))
        }
        "pauli1" => Ok((UnitaryEnsemble::PauliBasis(1), json!({"name": "pauli1"}))),
        "clifford1" => Ok((UnitaryEnsemble::Clifford(1), json!({"name": "clifford1"}))),
        "cliffordN" => {
            let n = n.ok_or_else(|| {
                CliError::Usage("--n is required for the cliffordN ensemble".into())
            })?;
            Ok((UnitaryEnsemble::Clifford(n), json!({"name": "cliffordN", "n": n})))
        }
        path => {
            if !Path::new(path).exists() {
                return Err(CliError::Usage(format!(
                    "unknown ensemble {path:?}: expected haar, pauli1, clifford1, cliffordN, \
                     or the path of an ensemble manifest"
                )));
            }
            let finite = FiniteEnsemble::load_manifest(path)?;
            Ok((
                UnitaryEnsemble::FiniteUniform(finite),
                json!({"name": "manifest", "path": path}),
            ))
        }
    }
}

/// `Z ⊗ I^{⊗(n−1)}`: the default observable for barren/shadow runs.
fn z_on_first_qubit(n: usize) -> CMat {
    let z = pauli_matrices_1q()[3].clone();
    if n == 1 {
        z
    } else {
        kron(&z, &CMat::identity(1 << (n - 1)))
    }
}

/// `|0…0⟩⟨0…0|` on `n` qubits.
fn zero_state(n: usize) -> CMat {
    let mut rho = CMat::zeros(1 << n, 1 << n);
    rho.set(0, 0, c64(1.0, 0.0));
    rho
}

/// Deterministic parallel mean of a matrix-valued sampler: sample `i` uses
/// substream `base + i`, per-chunk sums run sequentially inside fixed chunk
/// boundaries, and the cross-chunk fold is ordered — so the result is
/// bit-identical for any thread count. Returns the entrywise mean and the
/// entrywise standard errors (real part in `re`, imaginary part in `im`).
fn chunked_matrix_mean(
    n_samples: usize,
    stream: RandomStream,
    sample: impl Fn(RandomStream) -> Result<CMat> + Sync,
) -> Result<(CMat, CMat)> {
    if n_samples < 2 {
        return Err(Error::Domain("Monte-Carlo cross-checks need at least 2 samples".into()));
    }
    type ChunkSum = (CMat, Vec<f64>, Vec<f64>);
    let chunks: Vec<Option<ChunkSum>> = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|c| {
            let lo = c * n_samples / MC_CHUNKS;
            let hi = (c + 1) * n_samples / MC_CHUNKS;
            let mut acc: Option<ChunkSum> = None;
            for i in lo..hi {
                let m = sample(stream.with_stream(stream.stream_id.wrapping_add(i as u64)))?;
                match &mut acc {
                    None => {
                        let sq_re: Vec<f64> = m.entries().iter().map(|z| z.re * z.re).collect();
                        let sq_im: Vec<f64> = m.entries().iter().map(|z| z.im * z.im).collect();
                        acc = Some((m, sq_re, sq_im));
                    }
                    Some((sum, sq_re, sq_im)) => {
                        for (idx, z) in m.entries().iter().enumerate() {
                            sq_re[idx] += z.re * z.re;
                            sq_im[idx] += z.im * z.im;
                        }
                        *sum = sum.add(&m);
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut total: Option<ChunkSum> = None;
    for part in chunks.into_iter().flatten() {
        total = Some(match total {
            None => part,
            Some((sum, mut sq_re, mut sq_im)) => {
                for (a, b) in sq_re.iter_mut().zip(&part.1) {
                    *a += b;
                }
                for (a, b) in sq_im.iter_mut().zip(&part.2) {
                    *a += b;
                }
                (sum.add(&part.0), sq_re, sq_im)
            }
        });
    }
    let (sum, sq_re, sq_im) = total.expect("at least one chunk is nonempty");
    let n = n_samples as f64;
    let mean = sum.scale_re(1.0 / n);
    let cols = mean.cols();
    let se = CMat::from_fn(mean.rows(), cols, |i, j| {
        let idx = i * cols + j;
        let m = mean.get(i, j);
        let var_re = ((sq_re[idx] - n * m.re * m.re) / (n - 1.0)).max(0.0);
        let var_im = ((sq_im[idx] - n * m.im * m.im) / (n - 1.0)).max(0.0);
        c64((var_re / n).sqrt(), (var_im / n).sqrt())
    });
    Ok((mean, se))
}

/// Largest entrywise deviation of `mean` from `reference`, in units of the
/// entry's standard error (real and imaginary parts scored separately).
fn max_deviation_std_errors(mean: &CMat, se: &CMat, reference: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..mean.rows() {
        for j in 0..mean.cols() {
            let dev = mean.get(i, j) - reference.get(i, j);
            let s = se.get(i, j);
            worst = worst.max(dev.re.abs() / s.re.max(1e-15));
            worst = worst.max(dev.im.abs() / s.im.max(1e-15));
        }
    }
    worst
}

fn run_wg(k: usize, d: usize) -> CliResult<Report> {
    let table = weingarten_table(k, d)?;
    let coefficients: Value = table
        .coefficients()
        .iter()
        .map(|(perm, &w)| {
            let key = serde_json::to_string(perm.mapping()).expect("integer arrays serialize");
            (key, json!(w))
        })
        .collect::<serde_json::Map<String, Value>>()
        .into();
    Ok(Report::new(
        json!({"subcommand": "wg", "k": k, "d": d}),
        json!({
            "mode": "exact",
            "coefficients": coefficients,
            "gram_rank": table.rank(),
            "commutant_dimension": table.rank(),
        }),
        json!({
            "pinv_rel_cutoff": PINV_REL_CUTOFF,
            "permutation_key_format": "one-line integer array: image of [0..k)",
            "gram_is_singular": table.rank() < table.perms().len(),
        }),
    ))
}

fn run_moment(
    k: usize,
    d: usize,
    observable: &Path,
    samples: Option<usize>,
    seed: u64,
) -> CliResult<Report> {
    let o = load_matrix_arg(observable, "observable")?;
    let exact = moment_apply_exact(&o, k, d)?;
    let projected_twice = moment_apply_exact(&exact, k, d)?;

    let mut results = json!({
        "mode": "exact",
        "moment": matrix_value(&exact)?,
        "input_trace": [o.trace().re, o.trace().im],
        "moment_trace": [exact.trace().re, exact.trace().im],
    });
    if let Some(n_samples) = samples {
        let (mean, se) = chunked_matrix_mean(n_samples, RandomStream::new(seed), |s| {
            let uk = kron_power(&sample_haar_unitary(d, s), k);
            Ok(uk.mul(&o).mul(&uk.dagger()))
        })?;
        results["monte_carlo"] = json!({
            "mode": "mc",
            "samples": n_samples,
            "max_abs_deviation": mean.max_abs_diff(&exact),
            "max_deviation_std_errors": max_deviation_std_errors(&mean, &se, &exact),
            "max_std_error": se.max_abs(),
        });
    }
    Ok(Report::new(
        json!({
            "subcommand": "moment", "k": k, "d": d,
            "observable": observable.display().to_string(),
            "samples": samples, "seed": seed,
        }),
        results,
        json!({
            "idempotency_error": projected_twice.max_abs_diff(&exact),
            "trace_preservation_error": (exact.trace() - o.trace()).norm(),
        }),
    ))
}

fn run_sym(k: usize, d: usize) -> CliResult<Report> {
    let ps = p_sym(d, k)?;
    let pa = p_asym(d, k)?;
    let ps_ref: &CMat = &ps;
    let pa_ref: &CMat = &pa;
    let s_dim = sym_dim(d, k);
    let a_dim = asym_dim(d, k);
    let state_moment = haar_state_moment(d, k)?;
    let uniform = ps_ref.scale_re(1.0 / s_dim as f64);
    Ok(Report::new(
        json!({"subcommand": "sym", "k": k, "d": d}),
        json!({
            "mode": "exact",
            "sym_dimension": s_dim,
            "asym_dimension": a_dim,
            "total_dimension": (d as u64).pow(k as u32),
            "haar_state_moment_coefficient": 1.0 / s_dim as f64,
        }),
        json!({
            "sym_trace_error": (ps_ref.trace().re - s_dim as f64).abs(),
            "asym_trace_error": (pa_ref.trace().re - a_dim as f64).abs(),
            "sym_idempotency_error": ps_ref.mul(ps_ref).max_abs_diff(ps_ref),
            "orthogonality_error": ps_ref.mul(pa_ref).max_abs(),
            "state_moment_error": state_moment.max_abs_diff(&uniform),
        }),
    ))
}

#[allow(clippy::too_many_arguments)]
fn run_certify(
    ensemble_name: &str,
    k: usize,
    d: Option<usize>,
    n: Option<usize>,
    mode: &str,
    samples: usize,
    tol: Option<f64>,
    seed: u64,
) -> CliResult<Report> {
    let (ensemble, ensemble_echo) = resolve_ensemble(ensemble_name, d, n)?;
    let certify_mode = match mode {
        "exact" => CertifyMode::Exact,
        "mc" => CertifyMode::MonteCarlo { pairs: samples, stream: RandomStream::new(seed) },
        other => {
            return Err(CliError::Usage(format!(
                "unknown mode {other:?} (expected exact or mc)"
            )))
        }
    };
    let report = certify_design(&ensemble, k, certify_mode)?;
    let tolerance = tol.unwrap_or(EXACT_DESIGN_TOL);
    let gap = (report.frame_potential - report.haar_frame_potential).abs();
    let mut results = value_of(&report)?;
    results["cardinality_lower_bound"] =
        json!(design_cardinality_lower_bound(k, ensemble.dim()));
    let mut diagnostics = json!({
        "tolerance": tolerance,
        "frame_gap": gap,
        "gap_within_tolerance": gap <= tolerance,
    });
    if let Some(se) = report.frame_std_error {
        diagnostics["gap_std_errors"] = json!(gap / se.max(1e-300));
    }
    Ok(Report::new(
        json!({
            "subcommand": "certify", "ensemble": ensemble_echo, "k": k,
            "mode": mode, "samples": if mode == "mc" { Some(samples) } else { None },
            "seed": seed, "tol": tolerance,
        }),
        results,
        diagnostics,
    ))
}

fn run_tpe(
    ensemble_name: &str,
    k: usize,
    d: Option<usize>,
    n: Option<usize>,
    power: usize,
) -> CliResult<Report> {
    if power == 0 || power > 8 {
        return Err(CliError::Usage("--power must lie in 1..=8".into()));
    }
    let (ensemble, ensemble_echo) = resolve_ensemble(ensemble_name, d, n)?;
    let base = tpe_norm_exact(&ensemble, k)?;
    let mut powers = Vec::with_capacity(power);
    for p in 1..=power {
        let amplified = amplify(&ensemble, p)?;
        let tpe = tpe_norm_exact(&amplified, k)?;
        let bound = base.powi(p as i32);
        powers.push(json!({
            "power": p,
            "tpe_norm": tpe,
            "power_bound": bound,
            "submultiplicative": tpe <= bound + 1e-9,
        }));
    }
    Ok(Report::new(
        json!({"subcommand": "tpe", "ensemble": ensemble_echo, "k": k, "power": power}),
        json!({"mode": "exact", "base_tpe_norm": base, "powers": powers}),
        json!({"bound_slack": 1e-9}),
    ))
}

fn run_twirl(
    d: usize,
    env: Option<usize>,
    samples: Option<usize>,
    seed: u64,
) -> CliResult<Report> {
    let env_dim = env.unwrap_or(d);
    let channel = ChannelKraus::random(d, env_dim, RandomStream::new(seed))?;
    let p = twirl_depolarizing_parameter(&channel)?;
    let fe = entanglement_fidelity(&channel);

    // Process-level check: on every matrix unit, the exact twirl equals the
    // depolarizing action X ↦ pX + (1 − p)·Tr(X)·I/d.
    let mut process_error = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let unit = CMat::from_fn(d, d, |i, j| {
                if i == a && j == b {
                    c64(1.0, 0.0)
                } else {
                    c64(0.0, 0.0)
                }
            });
            let twirled = twirl_apply_exact(&channel, &unit)?;
            let depolarized = unit
                .scale_re(p)
                .add(&CMat::identity(d).scale(unit.trace() * c64((1.0 - p) / d as f64, 0.0)));
            process_error = process_error.max(twirled.max_abs_diff(&depolarized));
        }
    }

    let mut results = json!({
        "mode": "exact",
        "entanglement_fidelity": fe,
        "depolarizing_parameter": p,
        "average_gate_fidelity_vs_identity":
            average_gate_fidelity(&channel, &CMat::identity(d))?,
        "twirl_equals_depolarizing_error": process_error,
    });
    if let Some(n_samples) = samples {
        let rho = zero_state_of_dim(d);
        let exact_out = twirl_apply_exact(&channel, &rho)?;
        // Substream block disjoint from the channel's own stream.
        let mc_stream = RandomStream::new(seed).with_stream(1u64 << 32);
        let (mean, se) = chunked_matrix_mean(n_samples, mc_stream, |s| {
            let u = sample_haar_unitary(d, s);
            let pushed = channel.apply(&u.mul(&rho).mul(&u.dagger()))?;
            Ok(u.dagger().mul(&pushed).mul(&u))
        })?;
        results["monte_carlo"] = json!({
            "mode": "mc",
            "samples": n_samples,
            "state": "|0⟩⟨0|",
            "max_abs_deviation": mean.max_abs_diff(&exact_out),
            "max_deviation_std_errors": max_deviation_std_errors(&mean, &se, &exact_out),
        });
    }
    Ok(Report::new(
        json!({
            "subcommand": "twirl", "d": d, "env_dim": env_dim,
            "samples": samples, "seed": seed,
        }),
        results,
        json!({"channel": "random Stinespring dilation", "kraus_count": env_dim}),
    ))
}

/// `|0⟩⟨0|` at arbitrary dimension (not necessarily a qubit register).
fn zero_state_of_dim(d: usize) -> CMat {
    let mut rho = CMat::zeros(d, d);
    rho.set(0, 0, c64(1.0, 0.0));
    rho
}

fn run_fidelity(d: usize, p: Option<f64>, env: Option<usize>, seed: u64) -> CliResult<Report> {
    let (channel, channel_echo) = match p {
        Some(pv) => (
            ChannelKraus::depolarizing(d, pv)?,
            json!({"kind": "depolarizing", "p": pv}),
        ),
        None => {
            let env_dim = env.unwrap_or(d);
            (
                ChannelKraus::random(d, env_dim, RandomStream::new(seed))?,
                json!({"kind": "random", "env_dim": env_dim, "seed": seed}),
            )
        }
    };
    let fe = entanglement_fidelity(&channel);
    let favg = average_gate_fidelity(&channel, &CMat::identity(d))?;
    let mut diagnostics = json!({
        "favg_from_fe_error": (favg - (d as f64 * fe + 1.0) / (d as f64 + 1.0)).abs(),
    });
    if let Some(pv) = p {
        let d2 = (d * d) as f64;
        diagnostics["fe_closed_form_error"] = json!((fe - (pv * d2 + 1.0 - pv) / d2).abs());
    }
    Ok(Report::new(
        json!({"subcommand": "fidelity", "d": d, "channel": channel_echo, "seed": seed}),
        json!({
            "mode": "exact",
            "entanglement_fidelity": fe,
            "average_gate_fidelity_vs_identity": favg,
            "depolarizing_parameter": twirl_depolarizing_parameter(&channel)?,
        }),
        diagnostics,
    ))
}

fn run_purity(
    d_a: usize,
    d_b: usize,
    samples: Option<usize>,
    seed: u64,
) -> CliResult<Report> {
    let purity = expected_purity(d_a, d_b)?;
    let entropy = page_entropy(d_a, d_b)?;
    let m = d_a.min(d_b) as f64;
    let n_big = d_a.max(d_b) as f64;
    let page_lower_bound = m.log2() - m / (2.0 * n_big * std::f64::consts::LN_2);

    let mut results = json!({
        "mode": "exact",
        "expected_purity": purity,
        "page_entropy_bits": entropy,
    });
    if let Some(n_samples) = samples {
        if n_samples < 2 {
            return Err(CliError::Computation(Error::Domain(
                "Monte-Carlo cross-checks need at least 2 samples".into(),
            )));
        }
        let dims = SubsystemDims::new(vec![d_a, d_b])?;
        let stream = RandomStream::new(seed);
        let purities: Vec<f64> = (0..n_samples as u64)
            .into_par_iter()
            .map(|i| {
                let psi =
                    sample_haar_state(d_a * d_b, stream.with_stream(stream.stream_id.wrapping_add(i)));
                let rho = psi.mul(&psi.dagger());
                let reduced = partial_trace(&rho, &dims, &[0])?;
                Ok(reduced.mul(&reduced).trace().re)
            })
            .collect::<Result<_>>()?;
        let (mean, se) = mean_and_std_error(&purities);
        results["monte_carlo"] = json!({
            "mode": "mc",
            "samples": n_samples,
            "mean_purity": mean,
            "std_error": se,
            "deviation_std_errors": (mean - purity).abs() / se.max(1e-300),
        });
    }
    Ok(Report::new(
        json!({
            "subcommand": "purity", "dA": d_a, "dB": d_b,
            "samples": samples, "seed": seed,
        }),
        results,
        json!({
            "page_lower_bound_bits": page_lower_bound,
            "exceeds_lower_bound": entropy > page_lower_bound,
        }),
    ))
}

fn run_barren(n: usize, samples: usize, seed: u64) -> CliResult<Report> {
    let observable = z_on_first_qubit(n);
    let config = BarrenConfig {
        n_qubits: n,
        observable: observable.clone(),
        generator: observable,
        initial_state: zero_state(n),
        samples,
    };
    let report = barren_plateau_experiment(&config, RandomStream::new(seed))?;
    let var_c_dev = (report.var_c - report.exact_var_c).abs() / report.var_c_std_error.max(1e-300);
    let var_dc_dev =
        (report.var_dc - report.exact_var_dc).abs() / report.var_dc_std_error.max(1e-300);
    let mut results = value_of(&report)?;
    results["mode"] = json!("mc");
    Ok(Report::new(
        json!({"subcommand": "barren", "n": n, "samples": samples, "seed": seed}),
        results,
        json!({
            "observable": "Z on qubit 0",
            "generator": "Z on qubit 0",
            "initial_state": "|0…0⟩⟨0…0|",
            "var_c_deviation_std_errors": var_c_dev,
            "var_dc_deviation_std_errors": var_dc_dev,
        }),
    ))
}

fn run_tails(
    kind: &str,
    n: Option<usize>,
    d: Option<usize>,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> CliResult<Report> {
    let parsed: TailKind = kind.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let size = match parsed {
        TailKind::MarkovPauli => n.ok_or_else(|| {
            CliError::Usage("--n (qubit count) is required for markov_pauli".into())
        })?,
        TailKind::Levy | TailKind::ExpOverlap => d.ok_or_else(|| {
            CliError::Usage(format!("--d (dimension) is required for {}", parsed.name()))
        })?,
    };
    let report = tail_check(parsed, size, epsilon, samples, RandomStream::new(seed))?;
    let mut results = value_of(&report)?;
    results["mode"] = json!("mc");
    Ok(Report::new(
        json!({
            "subcommand": "tails", "kind": parsed.name(), "size": size,
            "epsilon": epsilon, "samples": samples, "seed": seed,
        }),
        results,
        json!({"pass_criterion": "empirical_tail <= bound_value + 3·std_error"}),
    ))
}

fn run_shadow(
    n: usize,
    samples: usize,
    batches: usize,
    observable: Option<&Path>,
    state: Option<&Path>,
    seed: u64,
) -> CliResult<Report> {
    let (rho, state_echo) = match state {
        Some(path) => (load_matrix_arg(path, "state")?, json!(path.display().to_string())),
        None => (zero_state(n), json!("|0…0⟩⟨0…0|")),
    };
    let (obs, obs_echo) = match observable {
        Some(path) => (load_matrix_arg(path, "observable")?, json!(path.display().to_string())),
        None => (z_on_first_qubit(n), json!("Z on qubit 0")),
    };
    if rho.rows() != (1 << n) {
        return Err(CliError::Computation(Error::Dimension(format!(
            "state must be {0}×{0} for n = {n}",
            1 << n
        ))));
    }
    let estimates = estimate_observables(
        &rho,
        std::slice::from_ref(&obs),
        samples,
        batches,
        RandomStream::new(seed),
    )?;
    let exact_expectation = obs.mul(&rho).trace().re;
    Ok(Report::new(
        json!({
            "subcommand": "shadow", "n": n, "samples": samples, "batches": batches,
            "observable": obs_echo, "state": state_echo, "seed": seed,
        }),
        json!({
            "mode": "mc",
            "estimates": value_of(&estimates)?,
            "exact_expectation": exact_expectation,
            "exact_single_shot_variance": shadow_variance(&rho, &obs, VarianceMode::Exact)?,
            "variance_bound": shadow_variance(&rho, &obs, VarianceMode::Bound)?,
        }),
        json!({
            "estimator": "median of means over the global Clifford ensemble",
            "absolute_deviation": (estimates[0].estimate - exact_expectation).abs(),
        }),
    ))
}
