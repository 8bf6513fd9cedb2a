//! Dispatch of the subcommands and conversion of results to report payloads.

use std::path::PathBuf;

use gitwin_core::gitcore::{kn_stratification, GitError, NumericalInvariant, Stratification, Stratum, Support};
use gitwin_core::gradedmod::{
    complex_to_json, parse_complex, quantization_hom_dims, restrict_to_fixed, window_lift, window_test_complex,
    GradedError, WeightedRing,
};
use gitwin_core::rational::{format_rational, Rational};
use gitwin_core::vgit::{classify_linearization, git_fan, wall_crossing_report, VgitError, WallCrossingReport};
use gitwin_core::windows::{
    enumerate_rules, enumerate_window_characters, match_windows_across_wall, window_rules, WindowCharacterSet,
    WindowError, WindowSpec,
};
use serde_json::{json, Map, Value};

use crate::problem::{LoadError, ProblemFile};
use crate::report::{digest, Report};

pub const DEFAULT_BOX: u32 = 10;
pub const DEFAULT_MAX_TWIST: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Stratify,
    Fan,
    Wallcross,
    Windows,
    Lift,
    Quantize,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Stratify, Command::Fan, Command::Wallcross, Command::Windows, Command::Lift, Command::Quantize];

    pub fn name(self) -> &'static str {
        match self {
            Command::Stratify => "stratify",
            Command::Fan => "fan",
            Command::Wallcross => "wallcross",
            Command::Windows => "windows",
            Command::Lift => "lift",
            Command::Quantize => "quantize",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub window: Option<Vec<i64>>,
    pub wall: Option<Vec<i64>>,
    pub direction: Option<Vec<i64>>,
    pub box_radius: Option<u32>,
    pub complex: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Load(_) | CliError::Precondition(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<GitError> for CliError {
    fn from(e: GitError) -> Self {
        match e {
            GitError::Polyhedra(_) | GitError::StratumMismatch(_) => CliError::Internal(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<VgitError> for CliError {
    fn from(e: VgitError) -> Self {
        match e {
            VgitError::Git(g) => g.into(),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<WindowError> for CliError {
    fn from(e: WindowError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<GradedError> for CliError {
    fn from(e: GradedError) -> Self {
        match e {
            GradedError::IterationBound(_) | GradedError::Internal(_) => CliError::Internal(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn support(s: Support) -> Value {
    json!(s.indices())
}

fn supports(list: &[Support]) -> Value {
    Value::Array(list.iter().map(|&s| support(s)).collect())
}

fn invariant(mu: &NumericalInvariant) -> Value {
    json!({
        "pairing": rational(&mu.pairing),
        "norm_squared": rational(&mu.norm_squared),
        "signed_mu_squared": rational(&mu.signed_mu_squared()),
    })
}

fn stratum(s: &Stratum) -> Value {
    json!({
        "lambda": s.lambda,
        "mu": invariant(&s.mu),
        "fixed_coords": support(s.fixed_coords),
        "blade_coords": support(s.blade_coords),
        "member_supports": supports(&s.member_supports),
        "eta": s.eta,
        "omega_weight": s.omega_weight,
    })
}

fn stratification(st: &Stratification) -> Value {
    if st.strata.is_empty() {
        return json!({"strata": [], "semistable": "all"});
    }
    json!({
        "strata": st.strata.iter().map(stratum).collect::<Vec<_>>(),
        "semistable": supports(&st.semistable_supports),
        "strictly_semistable": supports(&st.strictly_semistable_supports),
    })
}

fn window_set(set: &WindowCharacterSet) -> Value {
    json!({
        "rules": set.rules.iter().map(|r| json!({"lambda": r.lambda, "eta": r.eta, "w": r.w})).collect::<Vec<_>>(),
        "box_radius": set.box_radius,
        "characters": set.characters,
        "finite": set.finite,
        "bounding_radius": set.bounding_radius,
        "complete": set.complete,
        "translation_lattice": set.translation_lattice,
    })
}

fn crossing(r: &WallCrossingReport) -> Value {
    json!({
        "wall_point": r.wall_point,
        "direction": r.direction,
        "epsilon": rational(&r.epsilon),
        "chi_plus": r.chi_plus,
        "chi_minus": r.chi_minus,
        "plus_strata": r.plus_strata.iter().map(stratum).collect::<Vec<_>>(),
        "minus_strata": r.minus_strata.iter().map(stratum).collect::<Vec<_>>(),
        "one_sided": r.one_sided,
        "balanced": r.balanced,
        "pairs": r.pairs.iter().map(|p| json!({
            "lambda_plus": p.lambda_plus,
            "lambda_minus": p.lambda_minus,
            "eta_plus": p.eta_plus,
            "eta_minus": p.eta_minus,
            "fixed_coords": support(p.fixed_coords),
            "omega_weight": p.omega_weight,
            "member_supports_match": p.member_supports_match,
        })).collect::<Vec<_>>(),
        "verdict": r.verdict.as_str(),
        "cy_shortcut": r.cy_shortcut,
    })
}

fn count(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

pub fn run_command(command: Command, file: &ProblemFile, flags: &Flags) -> Result<Report, CliError> {
    let problem = &file.problem;
    let mut options = Map::new();
    let box_radius = flags.box_radius.unwrap_or(DEFAULT_BOX);
    let result = match command {
        Command::Stratify => {
            let st = kn_stratification(problem)?;
            let mut out = stratification(&st);
            if !st.strata.is_empty() {
                out["linearization_class"] = json!(classify_linearization(problem)?.as_str());
            }
            out
        }
        Command::Fan => {
            let fan = git_fan(problem.rank(), problem.weights())?;
            json!({
                "rank": fan.rank,
                "effective_cone": fan.effective_cone.generators(),
                "chambers": fan.chambers.iter().map(|c| json!({
                    "rays": c.rays, "facets": c.facets, "interior_point": c.interior_point,
                })).collect::<Vec<_>>(),
                "walls": fan.walls.iter().map(|w| json!({
                    "rays": w.rays, "normal": w.normal, "adjacent_chambers": w.adjacent_chambers,
                })).collect::<Vec<_>>(),
                "linearization_class": classify_linearization(problem)?.as_str(),
            })
        }
        Command::Wallcross => {
            let block = file.wall_crossing.as_ref();
            let wall = flags
                .wall
                .clone()
                .or_else(|| block.map(|b| b.wall_point.clone()))
                .unwrap_or_else(|| problem.linearization().to_vec());
            let direction = flags
                .direction
                .clone()
                .or_else(|| block.map(|b| b.direction.clone()))
                .ok_or_else(|| CliError::Usage("wallcross needs --direction or a wall_crossing block".into()))?;
            if wall.len() != problem.rank() {
                return Err(CliError::Precondition(format!("wall point has length {}, expected {}", wall.len(), problem.rank())));
            }
            options.insert("wall".into(), json!(wall));
            options.insert("direction".into(), json!(direction));
            let at_wall = problem.with_linearization(wall)?;
            let report = wall_crossing_report(&at_wall, &direction)?;
            let mut out = crossing(&report);
            if !report.one_sided && report.balanced {
                let w_plus = WindowSpec(flags.window.clone().unwrap_or_else(|| vec![0; report.plus_strata.len()]));
                if let Some(m) = match_windows_across_wall(&report, &w_plus)? {
                    let k = problem.rank();
                    let plus = enumerate_rules(k, window_rules(&report.plus_strata, &w_plus)?, box_radius);
                    let minus = enumerate_rules(k, window_rules(&report.minus_strata, &m.w_minus)?, box_radius);
                    options.insert("box".into(), json!(box_radius));
                    out["window_match"] = json!({
                        "w_plus": w_plus.values(),
                        "w_minus": m.w_minus.values(),
                        "relation": m.relation.as_str(),
                        "per_stratum": m.per_stratum.iter().map(|r| r.as_str()).collect::<Vec<_>>(),
                        "plus_characters": plus.characters,
                        "minus_characters": minus.characters,
                    });
                }
            }
            out
        }
        Command::Windows => {
            let st = kn_stratification(problem)?;
            let w = flags
                .window
                .clone()
                .or_else(|| (!file.window.is_empty()).then(|| file.window.clone()))
                .unwrap_or_else(|| vec![0; st.strata.len()]);
            options.insert("window".into(), json!(w));
            options.insert("box".into(), json!(box_radius));
            let set = enumerate_window_characters(&st, &WindowSpec(w), problem.rank(), box_radius)?;
            window_set(&set)
        }
        Command::Lift => {
            let path = flags.complex.as_ref().ok_or_else(|| CliError::Usage("lift needs --complex FILE".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
            let f = parse_complex(&text).map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
            let w = match flags.window.as_deref().or((!file.window.is_empty()).then_some(file.window.as_slice())) {
                None => 0,
                Some([w]) => *w,
                Some(other) => {
                    return Err(CliError::Precondition(format!("lift takes a single window integer, found {other:?}")))
                }
            };
            options.insert("window".into(), json!(w));
            options.insert("complex_digest".into(), json!(digest(text.as_bytes())));
            let lift = window_lift(&f, w)?;
            let eta = f.ring().eta();
            let profile = restrict_to_fixed(&lift.lifted);
            json!({
                "window": [w, w + eta],
                "steps": lift.steps,
                "passes_window_test": window_test_complex(&lift.lifted, w).passes,
                "fixed_weights": profile.0.iter().map(|(p, ws)| (p.to_string(), json!(ws))).collect::<Map<_, _>>(),
                "lifted": complex_to_json(&lift.lifted),
            })
        }
        Command::Quantize => {
            if problem.rank() != 1 || problem.weights().iter().any(|a| a[0] <= 0) {
                return Err(CliError::Precondition("quantize needs a rank-one problem with positive weights".into()));
            }
            let ring = WeightedRing::new(problem.weights().iter().map(|a| a[0]).collect())?;
            let max = flags.box_radius.unwrap_or(DEFAULT_MAX_TWIST);
            options.insert("box".into(), json!(max));
            let mut rows = Vec::new();
            for d in 0..=i64::from(max) {
                let (eq, quot) = quantization_hom_dims(&ring, 0, d)?;
                rows.push(json!({"difference": d, "equivariant": count(eq), "quotient": count(quot), "agree": eq == quot}));
            }
            json!({"ring_weights": ring.weights(), "counts": rows})
        }
    };
    Ok(Report { command: command.name().into(), options, input_digest: file.digest.clone(), result })
}
