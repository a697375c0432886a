//! Experiment configuration: scenario selection, file parsing, CLI merging,
//! and total validation.
//!
//! Config files are plain `key = value` text. Keys before any section header
//! are globals; a `[section]` header scoped to one scenario (`[accuracy]`,
//! `[relax-fermi]`, `[relax-bose]`, `[shock]`) overrides globals when that
//! scenario runs. CLI flags override both. Lines starting with `#` are
//! comments. Recognized keys:
//!
//! | key             | type    | meaning                                   |
//! |-----------------|---------|-------------------------------------------|
//! | `statistics`    | name    | `classical`, `bose`, or `fermi`           |
//! | `theta0`        | float   | quantum occupancy scale                   |
//! | `epsilon`       | float   | Knudsen number                            |
//! | `n`             | int     | velocity nodes per axis (even, ≥ 8)       |
//! | `l`             | float   | velocity-box half-width                   |
//! | `m`             | int     | kernel-table angular quadrature order     |
//! | `nx`            | int     | spatial cells                             |
//! | `x_min`,`x_max` | float   | spatial extent                            |
//! | `cfl`           | float   | Courant number in (0, 1]                  |
//! | `scheme`        | name    | `forward-euler`, `ap-first-order`,        |
//! |                 |         | `imex2`, `bgk-penalized`                  |
//! | `limiter`       | name    | `minmod`, `van-leer`, `none`              |
//! | `t_end`         | float   | final time                                |
//! | `seed`          | int     | RNG seed for randomized suites            |
//! | `symmetrize_ic` | bool    | normalize both relaxation IC Gaussians    |
//! | `lambda`        | float   | fixed penalization weight (else estimated)|
//! | `c_lambda`      | float   | scale for the estimated weight            |
//! | `dt`            | float   | fixed time step (else derived)            |

use std::path::PathBuf;

use crate::collision::CollisionStatistics;
use crate::dynamics::{Limiter, Scheme};
use crate::error::SolverError;

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Collision-solver accuracy study over N ∈ {16, 32, 64}.
    AccuracyTable,
    /// Homogeneous relaxation from the two-bump Fermi initial datum.
    RelaxFermi,
    /// Homogeneous relaxation from the lopsided Bose initial datum.
    RelaxBose,
    /// 1-D shock tube.
    ShockTube,
}

impl Scenario {
    /// Parses the CLI spelling.
    pub fn from_name(name: &str) -> Result<Self, SolverError> {
        match name {
            "accuracy" => Ok(Scenario::AccuracyTable),
            "relax-fermi" => Ok(Scenario::RelaxFermi),
            "relax-bose" => Ok(Scenario::RelaxBose),
            "shock" => Ok(Scenario::ShockTube),
            other => Err(SolverError::Config(format!(
                "scenario: expected accuracy, relax-fermi, relax-bose, or shock; got '{other}'"
            ))),
        }
    }

    /// CLI spelling, also the config-file section name.
    pub fn name(self) -> &'static str {
        match self {
            Scenario::AccuracyTable => "accuracy",
            Scenario::RelaxFermi => "relax-fermi",
            Scenario::RelaxBose => "relax-bose",
            Scenario::ShockTube => "shock",
        }
    }
}

/// Fully resolved run parameters (defaults + file + CLI, validated).
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Experiment selector.
    pub scenario: Scenario,
    /// Gas statistics.
    pub statistics: CollisionStatistics,
    /// Quantum occupancy scale θ0.
    pub theta0: f64,
    /// Knudsen number ε.
    pub epsilon: f64,
    /// Velocity nodes per axis.
    pub n: usize,
    /// Velocity-box half-width.
    pub l: f64,
    /// Kernel-table angular quadrature order.
    pub m: usize,
    /// Spatial cells.
    pub nx: usize,
    /// Left domain edge.
    pub x_min: f64,
    /// Right domain edge.
    pub x_max: f64,
    /// Courant number.
    pub cfl: f64,
    /// Time-stepping scheme.
    pub scheme: Scheme,
    /// Transport slope limiter.
    pub limiter: Limiter,
    /// Final time.
    pub t_end: f64,
    /// Output directory.
    pub output_dir: PathBuf,
    /// Seed for randomized suites.
    pub seed: u64,
    /// Apply the Gaussian normalization to both relaxation IC bumps.
    pub symmetrize_ic: bool,
    /// Fixed penalization weight; `None` means estimate from the field.
    pub lambda: Option<f64>,
    /// Scale factor for the estimated penalization weight.
    pub c_lambda: f64,
    /// Fixed time step; `None` means derive from the CFL condition (spatial
    /// runs) or use the relaxation default 1e-3.
    pub dt: Option<f64>,
}

impl ExperimentConfig {
    /// Config-file/CLI spelling of the statistics.
    pub fn statistics_name(&self) -> &'static str {
        match self.statistics {
            CollisionStatistics::Classical => "classical",
            CollisionStatistics::Bose => "bose",
            CollisionStatistics::Fermi => "fermi",
        }
    }

    /// Config-file/CLI spelling of the scheme.
    pub fn scheme_name(&self) -> &'static str {
        scheme_name(self.scheme)
    }

    /// Config-file spelling of the limiter.
    pub fn limiter_name(&self) -> &'static str {
        match self.limiter {
            Limiter::Minmod => "minmod",
            Limiter::VanLeer => "van-leer",
            Limiter::None => "none",
        }
    }
}

fn scheme_name(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::ForwardEuler => "forward-euler",
        Scheme::ApFirstOrder => "ap-first-order",
        Scheme::Imex2 => "imex2",
        Scheme::BgkPenalized => "bgk-penalized",
    }
}

fn parse_statistics(v: &str, ctx: &str) -> Result<CollisionStatistics, SolverError> {
    match v {
        "classical" => Ok(CollisionStatistics::Classical),
        "bose" => Ok(CollisionStatistics::Bose),
        "fermi" => Ok(CollisionStatistics::Fermi),
        other => Err(SolverError::Config(format!(
            "{ctx}statistics: expected classical, bose, or fermi; got '{other}'"
        ))),
    }
}

fn parse_scheme(v: &str, ctx: &str) -> Result<Scheme, SolverError> {
    match v {
        "forward-euler" => Ok(Scheme::ForwardEuler),
        "ap-first-order" => Ok(Scheme::ApFirstOrder),
        "imex2" => Ok(Scheme::Imex2),
        "bgk-penalized" => Ok(Scheme::BgkPenalized),
        other => Err(SolverError::Config(format!(
            "{ctx}scheme: expected forward-euler, ap-first-order, imex2, or bgk-penalized; \
             got '{other}'"
        ))),
    }
}

fn parse_limiter(v: &str, ctx: &str) -> Result<Limiter, SolverError> {
    match v {
        "minmod" => Ok(Limiter::Minmod),
        "van-leer" => Ok(Limiter::VanLeer),
        "none" => Ok(Limiter::None),
        other => Err(SolverError::Config(format!(
            "{ctx}limiter: expected minmod, van-leer, or none; got '{other}'"
        ))),
    }
}

fn parse_f64(v: &str, key: &str, ctx: &str) -> Result<f64, SolverError> {
    v.parse().map_err(|_| {
        SolverError::Config(format!("{ctx}{key}: expected a number, got '{v}'"))
    })
}

fn parse_usize(v: &str, key: &str, ctx: &str) -> Result<usize, SolverError> {
    v.parse().map_err(|_| {
        SolverError::Config(format!("{ctx}{key}: expected a non-negative integer, got '{v}'"))
    })
}

fn parse_bool(v: &str, key: &str, ctx: &str) -> Result<bool, SolverError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(SolverError::Config(format!(
            "{ctx}{key}: expected true or false, got '{other}'"
        ))),
    }
}

/// Partial configuration: one source's explicitly-set values.
#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub statistics: Option<CollisionStatistics>,
    pub theta0: Option<f64>,
    pub epsilon: Option<f64>,
    pub n: Option<usize>,
    pub l: Option<f64>,
    pub m: Option<usize>,
    pub nx: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub cfl: Option<f64>,
    pub scheme: Option<Scheme>,
    pub limiter: Option<Limiter>,
    pub t_end: Option<f64>,
    pub seed: Option<u64>,
    pub symmetrize_ic: Option<bool>,
    pub lambda: Option<f64>,
    pub c_lambda: Option<f64>,
    pub dt: Option<f64>,
}

impl Overlay {
    fn set(&mut self, key: &str, value: &str, ctx: &str) -> Result<(), SolverError> {
        match key {
            "statistics" => self.statistics = Some(parse_statistics(value, ctx)?),
            "theta0" => self.theta0 = Some(parse_f64(value, key, ctx)?),
            "epsilon" => self.epsilon = Some(parse_f64(value, key, ctx)?),
            "n" => self.n = Some(parse_usize(value, key, ctx)?),
            "l" => self.l = Some(parse_f64(value, key, ctx)?),
            "m" => self.m = Some(parse_usize(value, key, ctx)?),
            "nx" => self.nx = Some(parse_usize(value, key, ctx)?),
            "x_min" => self.x_min = Some(parse_f64(value, key, ctx)?),
            "x_max" => self.x_max = Some(parse_f64(value, key, ctx)?),
            "cfl" => self.cfl = Some(parse_f64(value, key, ctx)?),
            "scheme" => self.scheme = Some(parse_scheme(value, ctx)?),
            "limiter" => self.limiter = Some(parse_limiter(value, ctx)?),
            "t_end" => self.t_end = Some(parse_f64(value, key, ctx)?),
            "seed" => {
                self.seed = Some(value.parse().map_err(|_| {
                    SolverError::Config(format!(
                        "{ctx}seed: expected a non-negative integer, got '{value}'"
                    ))
                })?)
            }
            "symmetrize_ic" => self.symmetrize_ic = Some(parse_bool(value, key, ctx)?),
            "lambda" => self.lambda = Some(parse_f64(value, key, ctx)?),
            "c_lambda" => self.c_lambda = Some(parse_f64(value, key, ctx)?),
            "dt" => self.dt = Some(parse_f64(value, key, ctx)?),
            other => {
                return Err(SolverError::Config(format!(
                    "{ctx}unknown key '{other}'"
                )))
            }
        }
        Ok(())
    }

    /// Merges `over` on top of `self`: set fields in `over` win.
    fn merged_with(mut self, over: Overlay) -> Overlay {
        macro_rules! take {
            ($($field:ident),*) => { $( if over.$field.is_some() { self.$field = over.$field; } )* };
        }
        take!(
            statistics, theta0, epsilon, n, l, m, nx, x_min, x_max, cfl, scheme, limiter,
            t_end, seed, symmetrize_ic, lambda, c_lambda, dt
        );
        self
    }
}

const SECTIONS: [&str; 4] = ["accuracy", "relax-fermi", "relax-bose", "shock"];

/// Parses a config file's text for one scenario: globals first, then the
/// scenario's section on top. Other scenarios' sections are validated
/// syntactically but do not contribute values.
pub fn parse_config(text: &str, scenario: Scenario) -> Result<Overlay, SolverError> {
    let mut globals = Overlay::default();
    let mut section = Overlay::default();
    let mut current: Option<&str> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            match SECTIONS.iter().find(|s| **s == name) {
                Some(known) => current = Some(known),
                None => {
                    return Err(SolverError::Config(format!(
                        "line {}: unknown section '[{name}]' (expected one of [accuracy], \
                         [relax-fermi], [relax-bose], [shock])",
                        lineno + 1
                    )))
                }
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(SolverError::Config(format!(
                "line {}: expected 'key = value', got '{line}'",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        match current {
            None => globals.set(key, value, "")?,
            Some(name) if name == scenario.name() => {
                section.set(key, value, &format!("[{name}] "))?
            }
            // Foreign section: still validate the key and value so a typo
            // anywhere in the file is caught on every run.
            Some(name) => {
                Overlay::default().set(key, value, &format!("[{name}] "))?;
            }
        }
    }
    Ok(globals.merged_with(section))
}

/// Values settable from the command line (overriding the config file).
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub scheme: Option<Scheme>,
    pub epsilon: Option<f64>,
    pub theta0: Option<f64>,
    pub n: Option<usize>,
    pub l: Option<f64>,
    pub cfl: Option<f64>,
    pub symmetrize_ic: Option<bool>,
}

/// Parses a CLI scheme name.
pub fn scheme_from_name(name: &str) -> Result<Scheme, SolverError> {
    parse_scheme(name, "--")
}

fn config_err(key: &str, msg: String) -> SolverError {
    SolverError::Config(format!("{key}: {msg}"))
}

/// Applies scenario defaults underneath the file and CLI values, then
/// validates every field. Defaults follow the reference setup: M = 4,
/// N = 32, L = 8 — except L = 6 for a Bose gas at θ0 = 9, where the
/// equilibrium is so concentrated that a shorter box resolves it better.
pub fn resolve(
    scenario: Scenario,
    file: Overlay,
    cli: &CliOverrides,
    output_dir: PathBuf,
) -> Result<ExperimentConfig, SolverError> {
    // Precedence: CLI > section/global file values > scenario defaults.
    let pick = file;
    let statistics = pick.statistics.unwrap_or(match scenario {
        Scenario::AccuracyTable => CollisionStatistics::Classical,
        Scenario::RelaxFermi => CollisionStatistics::Fermi,
        Scenario::RelaxBose => CollisionStatistics::Bose,
        Scenario::ShockTube => CollisionStatistics::Bose,
    });
    match scenario {
        Scenario::RelaxFermi if statistics != CollisionStatistics::Fermi => {
            return Err(config_err(
                "statistics",
                format!(
                    "scenario relax-fermi requires fermi statistics, got '{}'",
                    if statistics == CollisionStatistics::Bose { "bose" } else { "classical" }
                ),
            ));
        }
        Scenario::RelaxBose if statistics != CollisionStatistics::Bose => {
            return Err(config_err(
                "statistics",
                format!(
                    "scenario relax-bose requires bose statistics, got '{}'",
                    if statistics == CollisionStatistics::Fermi { "fermi" } else { "classical" }
                ),
            ));
        }
        _ => {}
    }
    let theta0 = cli.theta0.or(pick.theta0).unwrap_or(match scenario {
        Scenario::RelaxFermi | Scenario::RelaxBose => 0.5,
        _ => 0.01,
    });
    if statistics != CollisionStatistics::Classical && !(theta0 > 0.0) {
        return Err(config_err(
            "theta0",
            format!("quantum statistics need theta0 > 0, got {theta0}"),
        ));
    }
    let epsilon = cli.epsilon.or(pick.epsilon).unwrap_or(1.0);
    if !(epsilon > 0.0) {
        return Err(config_err("epsilon", format!("must be positive, got {epsilon}")));
    }
    let n = cli.n.or(pick.n).unwrap_or(32);
    if n < 8 || n % 2 != 0 {
        return Err(config_err("n", format!("must be even and at least 8, got {n}")));
    }
    let l = cli.l.or(pick.l).unwrap_or(
        if statistics == CollisionStatistics::Bose && theta0 >= 9.0 {
            6.0
        } else {
            8.0
        },
    );
    if !(l > 0.0) {
        return Err(config_err("l", format!("must be positive, got {l}")));
    }
    let m = pick.m.unwrap_or(4);
    if m < 1 {
        return Err(config_err("m", format!("must be at least 1, got {m}")));
    }
    let nx = pick.nx.unwrap_or(100);
    if nx < 4 {
        return Err(config_err("nx", format!("must be at least 4, got {nx}")));
    }
    let x_min = pick.x_min.unwrap_or(0.0);
    let x_max = pick.x_max.unwrap_or(1.0);
    if !(x_max > x_min) {
        return Err(config_err(
            "x_max",
            format!("spatial extent [{x_min}, {x_max}] is empty"),
        ));
    }
    let cfl = cli.cfl.or(pick.cfl).unwrap_or(0.5);
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(config_err("cfl", format!("must lie in (0, 1], got {cfl}")));
    }
    let scheme = cli.scheme.or(pick.scheme).unwrap_or(Scheme::ApFirstOrder);
    let limiter = pick.limiter.unwrap_or(Limiter::Minmod);
    let t_end = pick.t_end.unwrap_or(match scenario {
        Scenario::ShockTube => 0.2,
        _ => 0.5,
    });
    if scenario != Scenario::AccuracyTable && !(t_end > 0.0) {
        return Err(config_err("t_end", format!("must be positive, got {t_end}")));
    }
    let seed = pick.seed.unwrap_or(0);
    let symmetrize_ic = cli.symmetrize_ic.or(pick.symmetrize_ic).unwrap_or(false);
    let lambda = pick.lambda;
    if let Some(lam) = lambda {
        if !(lam > 0.0) {
            return Err(config_err("lambda", format!("must be positive, got {lam}")));
        }
        if scheme == Scheme::BgkPenalized && lam <= 0.5 {
            return Err(config_err(
                "lambda",
                format!("the bgk-penalized scheme needs lambda > 1/2, got {lam}"),
            ));
        }
    }
    let c_lambda = pick.c_lambda.unwrap_or(1.0);
    if !(c_lambda > 0.0) {
        return Err(config_err("c_lambda", format!("must be positive, got {c_lambda}")));
    }
    let dt = pick.dt;
    if let Some(step) = dt {
        if !(step > 0.0) {
            return Err(config_err("dt", format!("must be positive, got {step}")));
        }
    }
    Ok(ExperimentConfig {
        scenario,
        statistics,
        theta0,
        epsilon,
        n,
        l,
        m,
        nx,
        x_min,
        x_max,
        cfl,
        scheme,
        limiter,
        t_end,
        output_dir,
        seed,
        symmetrize_ic,
        lambda,
        c_lambda,
        dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_text(text: &str, scenario: Scenario) -> Result<ExperimentConfig, SolverError> {
        let overlay = parse_config(text, scenario)?;
        resolve(scenario, overlay, &CliOverrides::default(), PathBuf::from("out"))
    }

    #[test]
    fn defaults_match_the_reference_setup() {
        let cfg = resolve_text("", Scenario::ShockTube).unwrap();
        assert_eq!((cfg.n, cfg.m), (32, 4));
        assert_eq!(cfg.l, 8.0);
        assert_eq!(cfg.t_end, 0.2);
        assert_eq!(cfg.statistics, CollisionStatistics::Bose);
        assert_eq!(cfg.scheme, Scheme::ApFirstOrder);
        // The concentrated Bose state at theta0 = 9 shortens the box.
        let cfg = resolve_text("theta0 = 9", Scenario::ShockTube).unwrap();
        assert_eq!(cfg.l, 6.0);
        // ...unless l is set explicitly.
        let cfg = resolve_text("theta0 = 9\nl = 8", Scenario::ShockTube).unwrap();
        assert_eq!(cfg.l, 8.0);
        // Fermi at theta0 = 9 keeps the default box.
        let cfg =
            resolve_text("theta0 = 9\nstatistics = fermi", Scenario::ShockTube).unwrap();
        assert_eq!(cfg.l, 8.0);
    }

    #[test]
    fn section_overrides_global_and_cli_overrides_both() {
        let text = "epsilon = 1.0\ntheta0 = 0.3\n[shock]\nepsilon = 1e-4\n\
                    [relax-fermi]\nepsilon = 0.25\n";
        let shock = resolve_text(text, Scenario::ShockTube).unwrap();
        assert_eq!(shock.epsilon, 1e-4);
        assert_eq!(shock.theta0, 0.3);
        let relax = resolve_text(text, Scenario::RelaxFermi).unwrap();
        assert_eq!(relax.epsilon, 0.25);
        let overlay = parse_config(text, Scenario::ShockTube).unwrap();
        let cli = CliOverrides {
            epsilon: Some(0.5),
            theta0: Some(9.0),
            ..CliOverrides::default()
        };
        let cfg = resolve(Scenario::ShockTube, overlay, &cli, PathBuf::from("out")).unwrap();
        assert_eq!(cfg.epsilon, 0.5);
        assert_eq!(cfg.theta0, 9.0);
    }

    #[test]
    fn errors_carry_the_field_and_section() {
        let err = resolve_text("theta0 = abc", Scenario::ShockTube).unwrap_err();
        assert!(err.to_string().contains("theta0"), "{err}");
        let err = resolve_text("[shock]\ncfl = 2.0", Scenario::ShockTube).unwrap_err();
        assert!(err.to_string().contains("cfl"), "{err}");
        let err = resolve_text("wibble = 3", Scenario::ShockTube).unwrap_err();
        assert!(err.to_string().contains("unknown key 'wibble'"), "{err}");
        let err = resolve_text("[warp]\nn = 16", Scenario::ShockTube).unwrap_err();
        assert!(err.to_string().contains("unknown section"), "{err}");
        let err = resolve_text("n = 15", Scenario::ShockTube).unwrap_err();
        assert!(err.to_string().contains("even"), "{err}");
        // A typo inside a section for a *different* scenario still fails.
        let err = resolve_text("[relax-bose]\nwobble = 1", Scenario::ShockTube).unwrap_err();
        assert!(err.to_string().contains("wobble"), "{err}");
    }

    #[test]
    fn relaxation_scenarios_pin_their_statistics() {
        let err = resolve_text("statistics = bose", Scenario::RelaxFermi).unwrap_err();
        assert!(err.to_string().contains("relax-fermi"), "{err}");
        let cfg = resolve_text("", Scenario::RelaxFermi).unwrap();
        assert_eq!(cfg.statistics, CollisionStatistics::Fermi);
        assert_eq!(cfg.theta0, 0.5);
        let cfg = resolve_text("", Scenario::RelaxBose).unwrap();
        assert_eq!(cfg.statistics, CollisionStatistics::Bose);
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in [
            Scenario::AccuracyTable,
            Scenario::RelaxFermi,
            Scenario::RelaxBose,
            Scenario::ShockTube,
        ] {
            assert_eq!(Scenario::from_name(s.name()).unwrap(), s);
        }
        assert!(Scenario::from_name("warp").is_err());
    }
}
