use std::fmt;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use gmc_core::catalog::{self, lst_infeasibility, Measure};
use gmc_core::gaussian_maxcorr::{gaussian_maximal_correlation, v_parameter};
use gmc_core::maxcorr::maximal_correlation;
use gmc_core::phase_space::StateDocument;
use gmc_core::ribbon::{in_gaussian_ribbon, in_ribbon, ribbon_gram, ThetaPoint};
use gmc_core::standard_form::{bipartite_standard_form, local_standard_form};
use gmc_core::verify::run_verification;
use gmc_core::{tol, Error, GaussianState, ModePartition};

use crate::format::{float, format_float, normalize};
use crate::{Cli, Command, Family, MeasureArg};

/// Sweeps larger than this many grid points are refused.
const MAX_SWEEP_POINTS: usize = 1_000_000;

pub enum Output {
    Json(String),
    Csv(String),
    /// A JSON report that records failures (exit code 1).
    Failed(String),
}

#[derive(Debug)]
pub enum CliError {
    Io {
        path: String,
        source: std::io::Error,
    },
    Core(Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_structural() => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "cannot read {path}: {source}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Files read by a command, hashed into the report.
#[derive(Default)]
struct Inputs {
    hasher: Option<Sha256>,
}

impl Inputs {
    fn read(&mut self, path: &str) -> CliResult<String> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?;
        self.hasher.get_or_insert_with(Sha256::new).update(&bytes);
        String::from_utf8(bytes).map_err(|e| CliError::Core(Error::Parse(format!("{path}: {e}"))))
    }

    /// Accepts a bare state document or a `catalog` report wrapping one.
    fn state(&mut self, path: &str) -> CliResult<GaussianState> {
        let text = self.read(path)?;
        match GaussianState::from_json(&text) {
            Ok(s) => Ok(s),
            Err(direct) => {
                let wrapped = serde_json::from_str::<Value>(&text)
                    .ok()
                    .and_then(|v| v.pointer("/results/state").cloned())
                    .and_then(|v| serde_json::from_value::<StateDocument>(v).ok());
                match wrapped {
                    Some(doc) => Ok(GaussianState::from_document(&doc)?),
                    None => Err(CliError::Core(direct)),
                }
            }
        }
    }

    fn digest(self) -> Value {
        match self.hasher {
            Some(h) => Value::String(hex::encode(h.finalize())),
            None => Value::Null,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn report(cli: &Cli, argv: &[String], inputs: Inputs, results: Value) -> String {
    let command = match &cli.command {
        Command::Validate { .. } => "validate",
        Command::StandardForm { .. } => "standard-form",
        Command::Mu { .. } => "mu",
        Command::MuG { .. } => "mu-g",
        Command::VParam { .. } => "v-param",
        Command::RibbonCheck { .. } => "ribbon-check",
        Command::GaussianRibbonCheck { .. } => "gaussian-ribbon-check",
        Command::RibbonSweep { .. } => "ribbon-sweep",
        Command::Feasibility { .. } => "feasibility",
        Command::Catalog { .. } => "catalog",
        Command::Verify { .. } => "verify",
    };
    let mut out = Map::new();
    out.insert("command".into(), json!(command));
    out.insert("arguments".into(), json!(argv));
    out.insert("input_digest".into(), inputs.digest());
    out.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    out.insert(
        "tolerances".into(),
        json!({
            "psd": cli.tol,
            "symmetry": tol::SYMMETRY,
            "decoupled": tol::DECOUPLED,
            "feasibility": tol::FEASIBILITY,
            "eigen_floor": tol::EIGEN_FLOOR,
        }),
    );
    out.insert("results".into(), results);
    let mut text =
        serde_json::to_string_pretty(&normalize(Value::Object(out))).expect("report serializes");
    text.push('\n');
    text
}

fn partition(text: Option<&str>, modes: usize) -> CliResult<ModePartition> {
    match text {
        Some(t) => Ok(ModePartition::parse(t, modes)?),
        None => Ok(ModePartition::singletons(modes)),
    }
}

fn physical(state: &GaussianState, tol: f64) -> CliResult<()> {
    state.ensure_physical(tol)?;
    Ok(())
}

/// Every point of the grid `{0, 1/(n-1), ..., 1}^m`, first axis slowest.
fn grid(points: usize, m: usize) -> CliResult<Vec<Vec<f64>>> {
    if points < 2 {
        return Err(CliError::Usage(
            "--sweep needs at least 2 points per axis".into(),
        ));
    }
    let total = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(points));
    match total {
        Some(t) if t <= MAX_SWEEP_POINTS => {}
        _ => {
            return Err(CliError::Usage(format!(
                "a {points}-point sweep over {m} parties exceeds {MAX_SWEEP_POINTS} points"
            )))
        }
    }
    let axis: Vec<f64> = (0..points)
        .map(|k| k as f64 / (points - 1) as f64)
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&t| {
                    let mut p = prefix.clone();
                    p.push(t);
                    p
                })
            })
            .collect();
    }
    Ok(out)
}

fn csv(
    m: usize,
    rows: impl Iterator<Item = CliResult<(Vec<f64>, bool, f64)>>,
) -> CliResult<String> {
    let mut text: String = (1..=m).map(|j| format!("theta_{j},")).collect();
    text.push_str("accepted,margin\n");
    for row in rows {
        let (theta, accepted, margin) = row?;
        for t in theta {
            text.push_str(&format_float(t));
            text.push(',');
        }
        let margin = if margin.is_finite() {
            format_float(margin)
        } else {
            "inf".to_string()
        };
        text.push_str(&format!("{accepted},{margin}\n"));
    }
    Ok(text)
}

fn quantum_sweep(state: &GaussianState, points: usize, tol: f64) -> CliResult<String> {
    physical(state, tol)?;
    let gram = ribbon_gram(state)?;
    let rows = grid(points, state.modes())?.into_iter().map(|t| {
        let margin = gram.margin(&t);
        Ok((t, margin >= -tol, margin))
    });
    csv(state.modes(), rows)
}

fn gaussian_sweep(
    state: &GaussianState,
    parties: &ModePartition,
    points: usize,
    tol: f64,
) -> CliResult<String> {
    physical(state, tol)?;
    let rows = grid(points, parties.len())?.into_iter().map(|t| {
        let v = in_gaussian_ribbon(state, parties, &ThetaPoint::new(t.clone())?, tol)?;
        Ok((t, v.accepted, v.margin))
    });
    csv(parties.len(), rows)
}

fn verdict_value(v: &catalog::FeasibilityVerdict) -> Value {
    to_value(v)
}

pub fn run(cli: &Cli, argv: &[String]) -> CliResult<Output> {
    let tol = cli.tol;
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be a non-negative number, got {tol}"
        )));
    }
    let mut inputs = Inputs::default();
    let results = match &cli.command {
        Command::Validate { path } => {
            let s = inputs.state(path)?;
            let check = s.check_physical(tol);
            json!({
                "modes": s.modes(),
                "physical": check.physical,
                "symmetric": check.symmetric,
                "min_eigenvalue": check.min_eigenvalue,
                "boundary": check.boundary,
                "purity": s.purity().ok(),
                "classical": s.is_classical(tol),
                "classicality_margin": s.classicality_margin(),
            })
        }
        Command::StandardForm { path } => {
            let s = inputs.state(path)?;
            physical(&s, tol)?;
            let sf = if s.modes() == 2 {
                bipartite_standard_form(&s)?
            } else {
                local_standard_form(&s)?
            };
            json!({
                "form": sf.summary(),
                "state": sf.standardized.to_document(),
            })
        }
        Command::Mu { path } => {
            let s = inputs.state(path)?;
            physical(&s, tol)?;
            let r = maximal_correlation(&s)?;
            json!({
                "mu": r.mu,
                "decoupled": r.decoupled,
                "f": r.f,
                "g": r.g,
                "quadrature_coefficients": r.quadrature_coeffs,
                "q1": r.q1.row_iter().map(|row| row.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
                "standard_form": r.standard_form.summary(),
            })
        }
        Command::MuG { path, partition: p } => {
            let s = inputs.state(path)?;
            physical(&s, tol)?;
            let parties = partition(p.as_deref(), s.modes())?;
            let r = gaussian_maximal_correlation(&s, &parties)?;
            json!({ "partition": parties.parties(), "report": r })
        }
        Command::VParam { path, partition: p } => {
            let s = inputs.state(path)?;
            physical(&s, tol)?;
            let parties = partition(p.as_deref(), s.modes())?;
            let v = v_parameter(&s, &parties)?;
            let mu_g = gaussian_maximal_correlation(&s, &parties)?.mu_g;
            json!({ "partition": parties.parties(), "v": v, "one_minus_mu_g": 1.0 - mu_g })
        }
        Command::RibbonCheck { path, theta, sweep } => {
            let s = inputs.state(path)?;
            if let Some(n) = sweep {
                return Ok(Output::Csv(quantum_sweep(&s, *n, tol)?));
            }
            physical(&s, tol)?;
            let t = ThetaPoint::parse(theta.as_deref().unwrap_or_default())?;
            let v = in_ribbon(&s, &t, tol)?;
            json!({ "theta": t.values(), "accepted": v.accepted, "margin": float(v.margin) })
        }
        Command::GaussianRibbonCheck {
            path,
            theta,
            partition: p,
            sweep,
        } => {
            let s = inputs.state(path)?;
            let parties = partition(p.as_deref(), s.modes())?;
            if let Some(n) = sweep {
                return Ok(Output::Csv(gaussian_sweep(&s, &parties, *n, tol)?));
            }
            let t = ThetaPoint::parse(theta.as_deref().unwrap_or_default())?;
            let v = in_gaussian_ribbon(&s, &parties, &t, tol)?;
            json!({
                "partition": parties.parties(),
                "theta": t.values(),
                "accepted": v.accepted,
                "margin": float(v.margin),
            })
        }
        Command::RibbonSweep {
            path,
            sweep,
            gaussian,
            partition: p,
        } => {
            let s = inputs.state(path)?;
            let text = if *gaussian {
                let parties = partition(p.as_deref(), s.modes())?;
                gaussian_sweep(&s, &parties, *sweep, tol)?
            } else {
                if p.is_some() {
                    return Err(CliError::Usage("--partition requires --gaussian".into()));
                }
                quantum_sweep(&s, *sweep, tol)?
            };
            return Ok(Output::Csv(text));
        }
        Command::Feasibility {
            resource,
            target,
            werner,
            measure,
        } => {
            let res = inputs.state(resource)?;
            physical(&res, tol)?;
            let value = |s: &GaussianState| -> CliResult<f64> {
                Ok(match measure {
                    MeasureArg::Mu => maximal_correlation(s)?.mu,
                    MeasureArg::MuG => {
                        gaussian_maximal_correlation(s, &ModePartition::singletons(s.modes()))?.mu_g
                    }
                })
            };
            let which = match measure {
                MeasureArg::Mu => Measure::Mu,
                MeasureArg::MuG => Measure::MuG,
            };
            let resource_value = value(&res)?;
            let (target_value, target_kind) = match (target, werner) {
                (Some(path), None) => {
                    let t = inputs.state(path)?;
                    physical(&t, tol)?;
                    (value(&t)?, json!({ "state": path }))
                }
                (None, Some(kappa)) => {
                    if *measure != MeasureArg::Mu {
                        return Err(CliError::Usage(
                            "--werner targets are only comparable through --measure mu".into(),
                        ));
                    }
                    (catalog::werner_mu(*kappa)?, json!({ "werner": kappa }))
                }
                _ => {
                    return Err(CliError::Usage(
                        "feasibility needs a TARGET file or --werner KAPPA".into(),
                    ))
                }
            };
            let v = lst_infeasibility(which, resource_value, target_value);
            json!({ "target": target_kind, "verdict": verdict_value(&v) })
        }
        Command::Catalog {
            family,
            lambda,
            nu,
            lambda_b,
        } => {
            let (name, state) = match family {
                Family::Ca => ("ca", catalog::ca_state(*lambda, *nu)?),
                Family::Cc => ("cc", catalog::cc_state(*lambda, *nu)?),
                Family::Tmsv => ("tmsv", catalog::tmsv_state(*lambda)?),
                Family::Product => {
                    let lb = lambda_b.unwrap_or(*lambda);
                    for (name, l) in [("lambda", *lambda), ("lambda_b", lb)] {
                        if !(l >= 1.0 && l.is_finite()) {
                            return Err(CliError::Core(Error::OutOfRange {
                                name,
                                value: l,
                                expected: "lambda >= 1",
                            }));
                        }
                    }
                    ("product", GaussianState::thermal(&[*lambda, lb]))
                }
            };
            json!({ "family": name, "state": state.to_document() })
        }
        Command::Verify { seed, trials } => {
            let start = Instant::now();
            let r = run_verification(*seed, *trials);
            eprintln!(
                "gmc verify: {} properties x {} trials in {:.2} s",
                r.properties.len(),
                trials,
                start.elapsed().as_secs_f64()
            );
            let passed = r.all_passed;
            let text = report(cli, argv, inputs, to_value(&r));
            return Ok(if passed {
                Output::Json(text)
            } else {
                Output::Failed(text)
            });
        }
    };
    Ok(Output::Json(report(cli, argv, inputs, results)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_enumerates_all_points() {
        let g = grid(3, 2).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], vec![0.0, 0.0]);
        assert_eq!(g[1], vec![0.0, 0.5]);
        assert_eq!(g[8], vec![1.0, 1.0]);
        assert!(grid(1, 2).is_err());
        assert!(grid(1001, 3).is_err());
    }
}
