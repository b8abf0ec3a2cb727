//! Command-line orchestration: one subcommand per pipeline, JSON results with
//! the full run configuration and toolkit version embedded, CSV for series.
//! Exact pipelines are byte-identical across reruns and worker counts.

use crate::approximation::{
    build_test_function, cheb_expand, friedman_certificate, markov_bound_check, zygmund_sum,
};
use crate::asymptotics::{
    nu1_adjacency_wordcount, support_estimate, taylor_nu, verify_master_inequality,
    SupportNormalizer,
};
use crate::error::{precondition, Error, Result};
use crate::exact_expectations::{
    brute_force_expectation, denominator_gq, ExpectationEngine, DEFAULT_EXPANSION_BUDGET,
    DEFAULT_WORD_CAP,
};
use crate::free_group::Word;
use crate::gauss::{parse_rational, rational_to_f64};
use crate::limit_model::{kesten_norm, limit_norm_estimate, tau_moment};
use crate::nc_poly::{parse_nc_polynomial, NcPolynomial, ScalarPolynomial};
use crate::ratfun::RationalFunctionQ;
use crate::simulation::{
    rho_m, staircase_experiment, tail_experiment, weak_convergence_probe,
};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

pub fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Exact trace toolkit for words and polynomials of random permutation
/// matrices, with spectral-gap experiments for random regular graphs.
#[derive(Parser, Debug, Serialize)]
#[command(name = "permspec", version, about)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Exact E[tr_N w(S^N)] of a word, symbolically in x = 1/N and/or at
    /// concrete N.
    ExpectWord {
        /// Word text: a–z generators, A–Z inverses, 1 identity (e.g. abAB).
        #[arg(long)]
        word: String,
        /// Rank d (inferred from the word when omitted).
        #[arg(long = "d")]
        d: Option<usize>,
        /// Evaluate exactly at these N (repeatable).
        #[arg(long = "at")]
        at: Vec<u64>,
        /// Emit the symbolic rational function.
        #[arg(long)]
        symbolic: bool,
        /// Cross-check against the brute-force oracle (N ≤ 6).
        #[arg(long)]
        brute_force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Ψ_h(1/N) = E[tr_DN h(P(S^N,S^N*))] for a polynomial and test
    /// function h.
    ExpectPoly {
        /// Polynomial text (e.g. "a + A", "[0,1;1,0]*ab"), or "adjacency".
        #[arg(long)]
        poly: String,
        #[arg(long = "d")]
        d: Option<usize>,
        /// Coefficients of h, constant first: 0,0,1 is x².
        #[arg(long = "h")]
        h: String,
        #[arg(long = "at")]
        at: Vec<u64>,
        #[arg(long)]
        symbolic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// τ-moments (tr_D⊗τ)(P^p) in the limiting model, and the norm lower
    /// estimates m_{2p}^{1/2p}.
    LimitMoments {
        #[arg(long)]
        poly: String,
        #[arg(long = "d")]
        d: Option<usize>,
        #[arg(long)]
        pmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Taylor functionals ν₀..ν_m of Ψ_{x^p}, with the ν₁ word-count route
    /// cross-checked for the adjacency model.
    Nu {
        #[arg(long)]
        poly: String,
        #[arg(long = "d")]
        d: Option<usize>,
        /// Highest Taylor order to report.
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        pmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Support estimate of ν_order from moment growth.
    Support {
        #[arg(long)]
        poly: String,
        #[arg(long = "d")]
        d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        pmax: usize,
        /// unit | friedman (1 + p²(p+1)⁴)
        #[arg(long, default_value = "friedman")]
        normalizer: String,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chebyshev expansion of h on [−K, K], exact.
    Cheb {
        #[arg(long = "h")]
        h: String,
        #[arg(long = "K")]
        k: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Markov inequality verifier for h on [0, a], plus the Zygmund sum.
    MarkovCheck {
        #[arg(long = "h")]
        h: String,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long = "m", default_value_t = 1)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the smooth test function χ and measure its derivative norms.
    Testfn {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long = "K")]
        k: f64,
        #[arg(long = "m", default_value_t = 8)]
        m: usize,
        /// β for the L^β norm (defaults to the certificate choice 1+log(K/ε)
        /// conjugated).
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Friedman-shaped tail certificate at (d, ε, N).
    Certificate {
        #[arg(long = "d")]
        d: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long = "N")]
        n: u64,
        /// Stand-in for the universal constant (certificates are exact only
        /// in their N- and ε-scaling).
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random 2d-regular graphs and record λ₂ tail statistics.
    Simulate {
        #[arg(long = "d")]
        d: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV path for the per-trial rows.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plant a tangle (m self-loops at one vertex) and track the outlier
    /// near ρ_m = 2m−1 + (2d−1)/(2m−1).
    Staircase {
        #[arg(long = "d")]
        d: usize,
        #[arg(long = "m")]
        m: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sample without the planted tangle (control runs).
        #[arg(long)]
        no_plant: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Monte Carlo traces with the exact Ψ(1/N) and ν₀ + ν₁/N.
    WeakProbe {
        #[arg(long)]
        poly: String,
        #[arg(long = "d")]
        d: Option<usize>,
        #[arg(long = "h")]
        h: String,
        /// Comma-separated N grid, e.g. 50,100,200,400,800.
        #[arg(long, default_value = "50,100,200,400,800")]
        n_grid: String,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fast internal consistency checks; nonzero exit on any failure.
    Selftest {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Budget knobs, overridable through BUDGET_* environment variables.
pub struct Budgets {
    pub word_cap: usize,
    pub expansion_raw: u64,
    pub tau_support: usize,
}

impl Budgets {
    pub fn from_env() -> Self {
        let word_cap = std::env::var("BUDGET_WORD_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_WORD_CAP);
        let expansion_raw = std::env::var("BUDGET_EXPANSION_RAW")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_EXPANSION_BUDGET);
        let tau_support = std::env::var("BUDGET_TAU_SUPPORT")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(4_000_000);
        Budgets { word_cap, expansion_raw, tau_support }
    }
}

fn seed_override(flag: u64) -> u64 {
    std::env::var("SEED").ok().and_then(|v| v.parse().ok()).unwrap_or(flag)
}

fn envelope(config: &RunConfig, result: Value) -> Value {
    json!({
        "tool": "permspec",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "result": result,
    })
}

fn rational_json(r: &BigRational) -> Value {
    json!({ "exact": r.to_string(), "approx": rational_to_f64(r) })
}

fn symbolic_json(psi: &RationalFunctionQ) -> Result<Value> {
    let factors = psi
        .denominator_factors()
        .ok_or_else(|| Error::Internal("denominator is not in (1−jx) form".into()))?;
    Ok(json!({
        "variable": "x = 1/N",
        "numerator": psi.numerator().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "denominator": psi.denominator().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "denominator_factors": factors.factors.iter().map(|(j, m)| json!({
            "root_j": j, "multiplicity": m,
        })).collect::<Vec<_>>(),
    }))
}

fn parse_poly_arg(poly: &str, d: Option<usize>) -> Result<NcPolynomial> {
    parse_nc_polynomial(poly, d)
}

fn parse_n_grid(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| precondition(format!("bad N value {s:?} in grid")))
        })
        .collect()
}

fn write_csv(path: &PathBuf, config_line: &str, header: &str, rows: &[String]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "# config: {config_line}")?;
    writeln!(f, "{header}")?;
    for row in rows {
        writeln!(f, "{row}")?;
    }
    Ok(())
}

/// Run one pipeline and produce the full output document.
pub fn dispatch(config: &RunConfig) -> Result<Value> {
    let budgets = Budgets::from_env();
    let result = match &config.command {
        Command::ExpectWord { word, d, at, symbolic, brute_force, out: _ } => {
            let w = Word::parse(word, *d)?;
            let mut engine = ExpectationEngine::with_cap(budgets.word_cap);
            let we = engine.word_expectation(&w)?;
            let mut doc = json!({
                "word": word,
                "d": w.d(),
                "q": we.q,
                "reduced": we.reduced.to_string(),
                "reduces_to_identity": we.reduced.is_identity(),
                "valid_symbolic_from_n": we.q.max(1),
            });
            if *symbolic || at.is_empty() {
                doc["symbolic"] = symbolic_json(&we.psi)?;
                let gq = denominator_gq(we.q, w.d());
                doc["gq_divides"] = json!(we.den_factors.divides(&gq));
            }
            if !at.is_empty() {
                let mut values = Vec::new();
                for &n in at {
                    let value = engine.expectation_at(&w, n)?;
                    let mut row = json!({
                        "n": n,
                        "value": rational_json(&value),
                        "symbolic_domain": n as usize >= we.q,
                    });
                    if *brute_force {
                        let oracle = brute_force_expectation(&w, n)?;
                        row["brute_force"] = rational_json(&oracle);
                        row["oracle_match"] = json!(oracle == value);
                    }
                    values.push(row);
                }
                doc["values"] = json!(values);
            }
            doc
        }
        Command::ExpectPoly { poly, d, h, at, symbolic, out: _ } => {
            let p = parse_poly_arg(poly, *d)?;
            let h = ScalarPolynomial::parse(h)?;
            let mut engine = ExpectationEngine::with_cap(budgets.word_cap);
            let psi = engine.polynomial_trace_expectation(&p, &h, budgets.expansion_raw)?;
            let mut doc = json!({
                "d": p.d(),
                "coefficient_dimension": p.dim(),
                "degree": p.degree(),
                "h_degree": h.degree(),
                "valid_from_n": (h.degree() * p.degree()).max(1),
                "approx_coefficients": p.is_approx(),
            });
            if *symbolic || at.is_empty() {
                doc["symbolic"] = symbolic_json(&psi)?;
            }
            if !at.is_empty() {
                let mut values = Vec::new();
                let q_total = h.degree() * p.degree();
                for &n in at {
                    let value =
                        engine.polynomial_trace_expectation_at(&p, &h, n, budgets.expansion_raw)?;
                    values.push(json!({
                        "n": n,
                        "value": rational_json(&value),
                        "symbolic_domain": n as usize >= q_total.max(1),
                    }));
                }
                doc["values"] = json!(values);
            }
            doc
        }
        Command::LimitMoments { poly, d, pmax, out: _ } => {
            let p = parse_poly_arg(poly, *d)?;
            let rows: Vec<Value> = (0..=*pmax)
                .map(|power| -> Result<Value> {
                    let m = tau_moment(&p, power, budgets.tau_support)?;
                    if !m.is_real() {
                        return Ok(json!({ "p": power, "moment": m.to_string() }));
                    }
                    Ok(json!({ "p": power, "moment": rational_json(&m.re) }))
                })
                .collect::<Result<_>>()?;
            let norm_est = if p.degree() > 0 {
                let est = limit_norm_estimate(&p, (*pmax / 2).max(1), budgets.tau_support)?;
                json!({
                    "lower_bound": est.lower,
                    "used_square": est.used_square,
                    "even_moment_roots": est.estimates,
                    "ratio_diagnostic": est.ratios,
                })
            } else {
                Value::Null
            };
            json!({
                "d": p.d(),
                "kesten_norm": kesten_norm(p.d()),
                "rows": rows,
                "norm_estimate": norm_est,
            })
        }
        Command::Nu { poly, d, order, pmax, out: _ } => {
            let p = parse_poly_arg(poly, *d)?;
            if !p.is_self_adjoint() {
                return Err(precondition("nu requires a self-adjoint polynomial"));
            }
            let mut engine = ExpectationEngine::with_cap(budgets.word_cap);
            let is_adjacency = p.is_standard_adjacency();
            let mut rows = Vec::new();
            for power in 1..=*pmax {
                let psi = engine.polynomial_trace_expectation(
                    &p,
                    &ScalarPolynomial::monomial(power),
                    budgets.expansion_raw,
                )?;
                let nus = taylor_nu(&psi, *order)?;
                let mut row = json!({
                    "p": power,
                    "route": "taylor",
                    "nu": nus.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                });
                for (i, v) in nus.iter().enumerate() {
                    row[format!("nu{i}")] = json!(v.to_string());
                }
                let top = &nus[*order];
                row["normalized_growth"] =
                    json!(rational_to_f64(&top.abs()).powf(1.0 / power as f64));
                if is_adjacency && *order >= 1 {
                    let wc = nu1_adjacency_wordcount(p.d(), power)?;
                    row["nu1_wordcount"] = json!(wc.to_string());
                    row["routes_agree"] =
                        json!(nus[1] == BigRational::from_integer(wc));
                }
                rows.push(row);
            }
            json!({ "d": p.d(), "order": order, "rows": rows })
        }
        Command::Support { poly, d, order, pmax, normalizer, target, tol, out: _ } => {
            let p = parse_poly_arg(poly, *d)?;
            if !p.is_self_adjoint() {
                return Err(precondition("support requires a self-adjoint polynomial"));
            }
            let normalizer = match normalizer.as_str() {
                "unit" => SupportNormalizer::Unit,
                "friedman" => SupportNormalizer::FriedmanMomentBound,
                other => {
                    return Err(precondition(format!(
                        "unknown normalizer {other:?} (use unit or friedman)"
                    )))
                }
            };
            let mut engine = ExpectationEngine::with_cap(budgets.word_cap);
            let mut moments = Vec::new();
            for power in 1..=*pmax {
                let psi = engine.polynomial_trace_expectation(
                    &p,
                    &ScalarPolynomial::monomial(power),
                    budgets.expansion_raw,
                )?;
                let nus = taylor_nu(&psi, *order)?;
                moments.push((power, nus[*order].clone()));
            }
            let target = target.or_else(|| {
                if p.is_standard_adjacency() { Some(kesten_norm(p.d())) } else { None }
            });
            let est = support_estimate(&moments, normalizer, target, *tol)?;
            let mut doc = serde_json::to_value(&est)?;
            if *order >= 2 {
                doc["caveat"] = json!(
                    "higher-order functionals are probed from finitely many exact Taylor \
                     moments only; the estimate is numerical evidence, not a bound"
                );
            }
            doc
        }
        Command::Cheb { h, k, out: _ } => {
            let h = ScalarPolynomial::parse(h)?;
            let k = parse_rational(k).ok_or_else(|| precondition("bad K value"))?;
            let e = cheb_expand(&h, &k)?;
            json!({
                "K": k.to_string(),
                "coefficients": e.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "coefficients_f64": e.coeffs_f64(),
                "round_trip_exact": e.reconstruct_exact() == h,
            })
        }
        Command::MarkovCheck { h, a, m, out: _ } => {
            let h = ScalarPolynomial::parse(h)?;
            let rep = markov_bound_check(&h, *a, *m)?;
            let cheb = cheb_expand(
                &h,
                &parse_rational(&format!("{a}")).unwrap_or_else(|| {
                    BigRational::from_integer(BigInt::from(1))
                }),
            )?;
            let zyg = zygmund_sum(&cheb, *m, f64::INFINITY)?;
            json!({ "markov": rep, "zygmund": zyg })
        }
        Command::Testfn { rho, eps, k, m, beta, samples, out: _ } => {
            let tf = build_test_function(*rho, *eps, *k, *m)?;
            let beta = beta.unwrap_or_else(|| {
                let bstar = 1.0 + (k / eps).ln();
                bstar / (bstar - 1.0)
            });
            let step = (*samples).max(2);
            let mut monotone = true;
            let mut in_range = true;
            let mut prev = -1.0;
            for i in 0..=step {
                let x = k * i as f64 / step as f64;
                let v = tf.chi(x);
                if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    in_range = false;
                }
                if v < prev - 1e-10 {
                    monotone = false;
                }
                prev = v;
            }
            json!({
                "rho": rho, "eps": eps, "K": k, "m": m,
                "phi": tf.phi, "delta": tf.delta,
                "plateau_zero_at": rho + eps / 2.0,
                "plateau_one_at": rho + eps,
                "chi_at_zero": tf.chi(0.0),
                "chi_at_plateau": tf.chi(rho + eps),
                "in_range": in_range,
                "monotone": monotone,
                "norms": tf.norms(*m + 1, beta),
                "fitted_constant": tf.fitted_constant(),
            })
        }
        Command::Certificate { d, eps, n, constant, out: _ } => {
            let cert = friedman_certificate(*d, *eps, *n, *constant)?;
            serde_json::to_value(&cert)?
        }
        Command::Simulate { d, n, trials, eps, seed, out } => {
            let seed = seed_override(*seed);
            let exp = tail_experiment(*d, *n, *eps, *trials, seed)?;
            if let Some(path) = out {
                let rows: Vec<String> = exp
                    .rows
                    .iter()
                    .map(|r| {
                        format!(
                            "{},{},{},{},{}",
                            r.trial, r.lambda2, r.lambda_min, r.norm, r.exceeded
                        )
                    })
                    .collect();
                write_csv(
                    path,
                    &serde_json::to_string(config)?,
                    "trial,lambda2,lambda_min,norm,exceeded",
                    &rows,
                )?;
            }
            let mut lambdas: Vec<f64> = exp.rows.iter().map(|r| r.lambda2).collect();
            lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let quantile = |q: f64| lambdas[((lambdas.len() - 1) as f64 * q).round() as usize];
            let mut doc = serde_json::to_value(&exp)?;
            if out.is_some() {
                doc["rows"] = json!(format!("written to {}", out.as_ref().unwrap().display()));
            }
            doc["lambda2_quantiles"] = json!({
                "min": lambdas[0],
                "q25": quantile(0.25),
                "median": quantile(0.5),
                "q75": quantile(0.75),
                "max": lambdas[lambdas.len() - 1],
            });
            doc["kesten_norm"] = json!(kesten_norm(*d));
            doc
        }
        Command::Staircase { d, m, n, trials, seed, no_plant, out } => {
            let seed = seed_override(*seed);
            let exp = staircase_experiment(*d, *n, *m, *trials, seed, !no_plant)?;
            if let Some(path) = out {
                let rows: Vec<String> = exp
                    .rows
                    .iter()
                    .map(|r| format!("{},{},{}", r.trial, r.top, r.gap_to_rho))
                    .collect();
                write_csv(path, &serde_json::to_string(config)?, "trial,top,gap_to_rho", &rows)?;
            }
            let mut doc = serde_json::to_value(&exp)?;
            if out.is_some() {
                doc["rows"] = json!(format!("written to {}", out.as_ref().unwrap().display()));
            }
            doc["rho_next"] = json!(rho_m(*d, *m + 1));
            doc
        }
        Command::WeakProbe { poly, d, h, n_grid, trials, seed, out: _ } => {
            let p = parse_poly_arg(poly, *d)?;
            let h = ScalarPolynomial::parse(h)?;
            let grid = parse_n_grid(n_grid)?;
            let seed = seed_override(*seed);
            let mut engine = ExpectationEngine::with_cap(budgets.word_cap);
            let rep = weak_convergence_probe(
                &mut engine,
                &p,
                &h,
                &grid,
                *trials,
                seed,
                budgets.expansion_raw,
            )?;
            serde_json::to_value(&rep)?
        }
        Command::Selftest { out: _ } => selftest(&budgets)?,
    };
    Ok(envelope(config, result))
}

fn selftest(budgets: &Budgets) -> Result<Value> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut engine = ExpectationEngine::with_cap(budgets.word_cap);

    // Oracle equivalence on a small slice.
    let mut ok = true;
    for text in ["a", "aa", "ab", "abA", "abAB", "aabb"] {
        let w = Word::parse(text, Some(2))?;
        for n in 2..=4u64 {
            ok &= engine.expectation_at(&w, n)? == brute_force_expectation(&w, n)?;
        }
    }
    checks.push(("word expectation matches brute force".into(), ok));

    // ν₁ route equality at small p.
    let a = NcPolynomial::adjacency(2);
    let mut ok = true;
    for p in 1..=4usize {
        let psi = engine.polynomial_trace_expectation(
            &a,
            &ScalarPolynomial::monomial(p),
            budgets.expansion_raw,
        )?;
        let nu = taylor_nu(&psi, 1)?;
        ok &= nu[1] == BigRational::from_integer(nu1_adjacency_wordcount(2, p)?);
    }
    checks.push(("nu1 Taylor route equals word-count route".into(), ok));

    // Chebyshev round trip.
    let h = ScalarPolynomial::from_ints(&[1, -2, 3, 0, 5]);
    let e = cheb_expand(&h, &BigRational::from_integer(BigInt::from(4)))?;
    checks.push(("Chebyshev round trip exact".into(), e.reconstruct_exact() == h));

    // Test-function plateaus.
    let tf = build_test_function(kesten_norm(2), 0.5, 4.0, 4)?;
    checks.push((
        "test function plateaus".into(),
        tf.chi(0.0).abs() < 1e-12 && (tf.chi(4.0) - 1.0).abs() < 1e-12,
    ));

    // Master inequality spot check.
    let rep = verify_master_inequality(
        &mut engine,
        &a,
        &ScalarPolynomial::monomial(3),
        100,
        2,
        budgets.expansion_raw,
    )?;
    checks.push(("master inequality at h = x³, N = 100".into(), rep.pass));

    let all = checks.iter().all(|(_, p)| *p);
    let doc = json!({
        "checks": checks.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect::<Vec<_>>(),
        "all_pass": all,
    });
    if !all {
        // Surface the failure through the exit code; details are in the doc.
        eprintln!("{}", serde_json::to_string_pretty(&doc)?);
        return Err(Error::Internal("selftest failed".into()));
    }
    Ok(doc)
}

/// Output path of the active subcommand, when one was given (CSV-producing
/// commands handle their own --out inside dispatch).
pub fn json_out_path(config: &RunConfig) -> Option<&PathBuf> {
    match &config.command {
        Command::ExpectWord { out, .. }
        | Command::ExpectPoly { out, .. }
        | Command::LimitMoments { out, .. }
        | Command::Nu { out, .. }
        | Command::Support { out, .. }
        | Command::Cheb { out, .. }
        | Command::MarkovCheck { out, .. }
        | Command::Testfn { out, .. }
        | Command::Certificate { out, .. }
        | Command::WeakProbe { out, .. }
        | Command::Selftest { out } => out.as_ref(),
        Command::Simulate { .. } | Command::Staircase { .. } => None,
    }
}
