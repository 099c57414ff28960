//! Command-line front end: `run`, `regions` and `compare`.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::geometry::{
    build_arrangement, region_map_slice, region_map_sphere, write_region_csv,
    ConstraintArrangement, SteeringRegime,
};
use crate::kinematics::{ChassisGeometry, SteeringLimits};
use crate::planner::{PlannerConfig, PreferredSet, ScoringMode};
use crate::sim::metrics::{
    write_metrics_csv, write_metrics_rows, write_trajectory_csv, ExperimentSummary, METRICS_HEADER,
};
use crate::sim::world::run_experiment_with;
use crate::sim::{ExperimentConfig, RunMetrics, Scenario, Summary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCENARIO: i32 = 3;
pub const EXIT_TIMEOUT: i32 = 4;

/// The planner/controller combinations compared in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigId {
    Baseline1,
    Baseline2,
    AugDwa1,
    AugDwa2,
    AugDwa3,
    AugDwa4,
}

impl ConfigId {
    pub const ALL: [ConfigId; 6] = [
        ConfigId::Baseline1,
        ConfigId::Baseline2,
        ConfigId::AugDwa1,
        ConfigId::AugDwa2,
        ConfigId::AugDwa3,
        ConfigId::AugDwa4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConfigId::Baseline1 => "baseline-1",
            ConfigId::Baseline2 => "baseline-2",
            ConfigId::AugDwa1 => "aug-DWA-1",
            ConfigId::AugDwa2 => "aug-DWA-2",
            ConfigId::AugDwa3 => "aug-DWA-3",
            ConfigId::AugDwa4 => "aug-DWA-4",
        }
    }

    /// Applies this configuration's planner and controller switches.
    pub fn apply(self, cfg: &mut ExperimentConfig) {
        let augmented = |mode, set| PlannerConfig {
            scoring_mode: mode,
            preferred_set: set,
            swerve_critic: true,
            smoothness_critic: true,
            ..cfg.planner.clone()
        };
        let stock = PlannerConfig {
            swerve_critic: false,
            smoothness_critic: false,
            ..cfg.planner.clone()
        };
        cfg.controller.shortest_transition = self == ConfigId::Baseline2;
        cfg.planner = match self {
            ConfigId::Baseline1 | ConfigId::Baseline2 => stock,
            ConfigId::AugDwa1 => augmented(ScoringMode::DistanceBased, PreferredSet::ForwardOnly),
            ConfigId::AugDwa2 => augmented(ScoringMode::DistanceBased, PreferredSet::ForwardBackward),
            ConfigId::AugDwa3 => augmented(ScoringMode::Simple, PreferredSet::ForwardOnly),
            ConfigId::AugDwa4 => augmented(ScoringMode::Simple, PreferredSet::ForwardBackward),
        };
    }

    pub fn experiment_config(self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        self.apply(&mut cfg);
        cfg
    }

    fn valid_ids() -> String {
        Self::ALL.map(Self::as_str).join(", ")
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConfigId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown config id {s:?}; valid ids: {}", Self::valid_ids()))
    }
}

#[derive(Parser, Debug)]
#[command(name = "swervenav", version, about = "Swerve-aware local planning benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run repeated simulations of one scenario under one configuration.
    Run(RunArgs),
    /// Print the region structure for a set of steering limits and export a region map.
    Regions(RegionsArgs),
    /// Run several configurations on one scenario and flag the best.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Built-in scenario name (rectangle, figure8, figurex, maze) or a scenario file.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Standard deviation of both pose and velocity noise.
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// TOML file with experiment parameters; command-line flags take precedence.
    #[arg(long)]
    pub config_file: Option<PathBuf>,
    /// Exit with status 4 when any run abandons a goal.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub config: Option<ConfigId>,
    /// Output directory for metrics, summary and trajectories.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Skip the per-run trajectory logs.
    #[arg(long)]
    pub no_trajectories: bool,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated config ids; all six by default.
    #[arg(long, value_delimiter = ',')]
    pub configs: Vec<ConfigId>,
    /// Optional output directory for the combined metrics CSV and summaries.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegionsArgs {
    /// Symmetric steering limit in degrees.
    #[arg(long, default_value_t = 130.0)]
    pub delta_max_deg: f64,
    /// Lower limit in degrees; defaults to the negated upper limit.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_min_deg: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    pub wl: f64,
    #[arg(long, default_value_t = 0.2)]
    pub wr: f64,
    #[arg(long, default_value_t = 0.2)]
    pub lf: f64,
    #[arg(long, default_value_t = 0.2)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.08)]
    pub wheel_radius: f64,
    /// Yaw rate of the exported `(v_x, v_y)` slice.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub psi_dot: f64,
    /// Half-width of the exported slice.
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
    /// Grid points per axis of the slice.
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
    /// Export a latitude/longitude sphere tessellation instead of a slice.
    #[arg(long)]
    pub sphere: bool,
    /// CSV destination for the region map.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a, stdout),
        Command::Regions(a) => cmd_regions(&a, stdout),
        Command::Compare(a) => cmd_compare(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Scenario(_) | Error::Planning(_) => EXIT_SCENARIO,
        Error::InvalidConfig(_)
        | Error::InvalidGeometry(_)
        | Error::InvalidLimits(_)
        | Error::AsymmetricLimits { .. }
        | Error::Parse(_) => EXIT_USAGE,
        Error::TableConstruction(_) | Error::Io(_) => EXIT_FAILURE,
    }
}

fn merge_toml(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge_toml(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Settings read from a `--config-file`: experiment parameters plus the
/// optional `scenario` and `config_id` keys.
#[derive(Debug, Default)]
pub struct FileSettings {
    pub scenario: Option<String>,
    pub config_id: Option<ConfigId>,
    overrides: Option<toml::Value>,
}

impl FileSettings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)?;
        let mut value: toml::Value =
            toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let table = value
            .as_table_mut()
            .ok_or_else(|| Error::Parse("config file must be a table".into()))?;
        let take_str = |t: &mut toml::Table, key: &str| -> Result<Option<String>> {
            match t.remove(key) {
                None => Ok(None),
                Some(toml::Value::String(s)) => Ok(Some(s)),
                Some(_) => Err(Error::Parse(format!("{key} must be a string"))),
            }
        };
        let scenario = take_str(table, "scenario")?;
        let config_id = take_str(table, "config_id")?
            .map(|s| s.parse::<ConfigId>().map_err(Error::InvalidConfig))
            .transpose()?;
        Ok(Self {
            scenario,
            config_id,
            overrides: Some(value),
        })
    }

    /// Preset for `id`, then the file's parameters, then command-line flags.
    pub fn experiment_config(&self, id: ConfigId, common: &CommonArgs) -> Result<ExperimentConfig> {
        let mut cfg = id.experiment_config();
        if let Some(over) = &self.overrides {
            let mut value = toml::Value::try_from(&cfg).map_err(|e| Error::Parse(e.to_string()))?;
            merge_toml(&mut value, over.clone());
            cfg = value
                .try_into()
                .map_err(|e: toml::de::Error| Error::InvalidConfig(e.to_string()))?;
        }
        if let Some(r) = common.repeats {
            cfg.repeats = r;
        }
        if let Some(s) = common.seed {
            cfg.noise.seed = s;
        }
        if let Some(sigma) = common.noise_sigma {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "noise sigma must be non-negative, got {sigma}"
                )));
            }
            cfg.noise.pose_noise_sigma = sigma;
            cfg.noise.velocity_noise_sigma = sigma;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn scenario(&self, common: &CommonArgs) -> Result<Scenario> {
        let name = common
            .scenario
            .clone()
            .or_else(|| self.scenario.clone())
            .ok_or_else(|| Error::InvalidConfig("no scenario given (use --scenario)".into()))?;
        Scenario::load(&name)
    }
}

/// Arrangements are expensive to sample; reuse one per geometry and limits.
#[derive(Default)]
struct ArrangementCache {
    entries: Vec<ConstraintArrangement>,
}

impl ArrangementCache {
    fn get(&mut self, cfg: &ExperimentConfig) -> Result<&ConstraintArrangement> {
        let pos = self
            .entries
            .iter()
            .position(|a| *a.geometry() == cfg.geometry && *a.limits() == cfg.limits);
        let idx = match pos {
            Some(i) => i,
            None => {
                let mut arr = build_arrangement(&cfg.geometry, &cfg.limits)?;
                arr.set_stationary_threshold(cfg.planner.stationary_threshold);
                self.entries.push(arr);
                self.entries.len() - 1
            }
        };
        Ok(&self.entries[idx])
    }
}

fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

fn summary_json(summary: &ExperimentSummary) -> Result<String> {
    serde_json::to_string_pretty(summary)
        .map(|s| s + "\n")
        .map_err(|e| Error::Parse(e.to_string()))
}

fn any_incomplete(runs: &[RunMetrics]) -> bool {
    runs.iter().any(|r| !r.completed)
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let file = FileSettings::load(args.common.config_file.as_deref())?;
    let id = args
        .config
        .or(file.config_id)
        .ok_or_else(|| Error::InvalidConfig(format!("no config id given; valid ids: {}", ConfigId::valid_ids())))?;
    let scenario = file.scenario(&args.common)?;
    let cfg = file.experiment_config(id, &args.common)?;
    let mut cache = ArrangementCache::default();
    let arr = cache.get(&cfg)?;
    let runs = run_experiment_with(&scenario, &cfg, arr)?;
    let summary = ExperimentSummary::new(&scenario.name, id.as_str(), &runs)?;

    fs::create_dir_all(&args.out)?;
    let stem = format!("{}_{}", scenario.name, id.as_str());
    write_file(&args.out.join(format!("metrics_{stem}.csv")), |b| {
        write_metrics_csv(b, &scenario.name, id.as_str(), &runs)
    })?;
    fs::write(args.out.join(format!("summary_{stem}.json")), summary_json(&summary)?)?;
    if !args.no_trajectories {
        let dir = args.out.join("trajectories");
        fs::create_dir_all(&dir)?;
        for r in &runs {
            write_file(&dir.join(format!("{stem}_run{:02}.csv", r.run)), |b| {
                write_trajectory_csv(b, &r.trajectory)
            })?;
        }
    }

    print_table(out, &[summary])?;
    Ok(if args.common.strict && any_incomplete(&runs) {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    })
}

pub fn cmd_regions(args: &RegionsArgs, out: &mut dyn Write) -> Result<i32> {
    let geo = ChassisGeometry::new(args.wl, args.wr, args.lf, args.lr, args.wheel_radius)?;
    let max = args.delta_max_deg.to_radians();
    let min = args.delta_min_deg.map_or(-max, f64::to_radians);
    let lim = SteeringLimits::new(min, max)?;
    let arr = build_arrangement(&geo, &lim)?;
    match arr.regime() {
        SteeringRegime::Unconstrained => writeln!(out, "unconstrained: 1 region")?,
        SteeringRegime::RightAngle => writeln!(out, "{} regions", arr.region_count())?,
        SteeringRegime::General => {
            writeln!(
                out,
                "{} signatures, {} regions",
                arr.signature_count(),
                arr.region_count()
            )?;
            for r in arr.table().regions() {
                writeln!(
                    out,
                    "region {:>2}: {:>2} signatures, solid angle {:.3} sr, bounding rows {:?}",
                    r.id.0,
                    r.signatures.len(),
                    r.solid_angle,
                    r.bounding_rows.iter().map(|j| j + 1).collect::<Vec<_>>()
                )?;
            }
        }
    }
    if let Some(path) = &args.out {
        let samples = if args.sphere {
            region_map_sphere(&arr, args.resolution, 2 * args.resolution)
        } else {
            region_map_slice(&arr, args.psi_dot, args.extent, args.resolution)
        };
        write_file(path, |b| write_region_csv(b, &samples))?;
        writeln!(out, "wrote {} samples to {}", samples.len(), path.display())?;
    }
    Ok(EXIT_OK)
}

/// Index of the best summary: lowest median, then lowest std, then lowest mean.
/// Remaining ties keep the earlier entry.
pub fn pick_winner(summaries: &[Summary]) -> Option<usize> {
    (0..summaries.len()).min_by(|&a, &b| {
        let (x, y) = (&summaries[a], &summaries[b]);
        x.median
            .total_cmp(&y.median)
            .then(x.std.total_cmp(&y.std))
            .then(x.mean.total_cmp(&y.mean))
            .then(a.cmp(&b))
    })
}

fn print_table(out: &mut dyn Write, rows: &[ExperimentSummary]) -> Result<()> {
    let disc: Vec<Summary> = rows.iter().map(|r| r.discontinuity_count).collect();
    let time: Vec<Summary> = rows.iter().map(|r| r.travel_time).collect();
    let (wd, wt) = (pick_winner(&disc), pick_winner(&time));
    writeln!(
        out,
        "{:<10} {:<11} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "scenario", "config", "disc_mean", "disc_med", "disc_std", "time_mean", "time_med", "time_std", "completed"
    )?;
    for (k, r) in rows.iter().enumerate() {
        let d = r.discontinuity_count;
        let t = r.travel_time;
        writeln!(
            out,
            "{:<10} {:<11} {:>9.2} {:>8.2}{} {:>9.2} {:>9.2} {:>8.2}{} {:>9.2} {:>6}/{:<2}",
            r.scenario,
            r.config_id,
            d.mean,
            d.median,
            if wd == Some(k) && rows.len() > 1 { "*" } else { " " },
            d.std,
            t.mean,
            t.median,
            if wt == Some(k) && rows.len() > 1 { "*" } else { " " },
            t.std,
            r.completed_runs,
            r.runs
        )?;
    }
    if rows.len() > 1 {
        if let (Some(a), Some(b)) = (wd, wt) {
            writeln!(out, "best discontinuity count: {}", rows[a].config_id)?;
            writeln!(out, "best travel time: {}", rows[b].config_id)?;
        }
    }
    Ok(())
}

pub fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<i32> {
    let file = FileSettings::load(args.common.config_file.as_deref())?;
    let scenario = file.scenario(&args.common)?;
    let ids: Vec<ConfigId> = if args.configs.is_empty() {
        ConfigId::ALL.to_vec()
    } else {
        args.configs.clone()
    };
    let mut cache = ArrangementCache::default();
    let mut summaries = Vec::new();
    let mut all_runs = Vec::new();
    for id in &ids {
        let cfg = file.experiment_config(*id, &args.common)?;
        let arr = cache.get(&cfg)?;
        let runs = run_experiment_with(&scenario, &cfg, arr)?;
        summaries.push(ExperimentSummary::new(&scenario.name, id.as_str(), &runs)?);
        all_runs.push((*id, runs));
    }
    print_table(out, &summaries)?;

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        write_file(&dir.join(format!("compare_{}.csv", scenario.name)), |b| {
            writeln!(b, "{METRICS_HEADER}")?;
            for (id, runs) in &all_runs {
                write_metrics_rows(&mut *b, &scenario.name, id.as_str(), runs)?;
            }
            Ok(())
        })?;
        let json = serde_json::to_string_pretty(&summaries).map_err(|e| Error::Parse(e.to_string()))?;
        fs::write(dir.join(format!("compare_{}.json", scenario.name)), json + "\n")?;
    }
    let incomplete = all_runs.iter().any(|(_, r)| any_incomplete(r));
    Ok(if args.common.strict && incomplete {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(median: f64, std: f64, mean: f64) -> Summary {
        Summary { mean, median, std }
    }

    #[test]
    fn config_ids_round_trip() {
        for id in ConfigId::ALL {
            assert_eq!(id.as_str().parse::<ConfigId>().unwrap(), id);
        }
        let err = "aug-DWA-9".parse::<ConfigId>().unwrap_err();
        for id in ConfigId::ALL {
            assert!(err.contains(id.as_str()));
        }
    }

    #[test]
    fn presets_match_their_rows() {
        let b1 = ConfigId::Baseline1.experiment_config();
        let b2 = ConfigId::Baseline2.experiment_config();
        assert!(!b1.controller.shortest_transition && b2.controller.shortest_transition);
        assert!(!b1.planner.swerve_critic && !b2.planner.swerve_critic);
        let rows = [
            (ConfigId::AugDwa1, ScoringMode::DistanceBased, PreferredSet::ForwardOnly),
            (ConfigId::AugDwa2, ScoringMode::DistanceBased, PreferredSet::ForwardBackward),
            (ConfigId::AugDwa3, ScoringMode::Simple, PreferredSet::ForwardOnly),
            (ConfigId::AugDwa4, ScoringMode::Simple, PreferredSet::ForwardBackward),
        ];
        for (id, mode, set) in rows {
            let c = id.experiment_config();
            assert!(c.planner.swerve_critic && c.planner.smoothness_critic);
            assert!(!c.controller.shortest_transition);
            assert_eq!((c.planner.scoring_mode, c.planner.preferred_set), (mode, set));
        }
        // Pairwise distinct effective parameters.
        let all: Vec<_> = ConfigId::ALL.iter().map(|c| c.experiment_config()).collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_ne!(all[i], all[j], "{} vs {}", ConfigId::ALL[i], ConfigId::ALL[j]);
            }
        }
    }

    #[test]
    fn winner_rule() {
        assert_eq!(pick_winner(&[s(3.0, 1.0, 3.0), s(2.0, 5.0, 9.0)]), Some(1));
        assert_eq!(pick_winner(&[s(2.0, 1.5, 2.0), s(2.0, 0.5, 4.0)]), Some(1));
        assert_eq!(pick_winner(&[s(2.0, 1.0, 3.0), s(2.0, 1.0, 2.5)]), Some(1));
        assert_eq!(pick_winner(&[s(2.0, 1.0, 3.0), s(2.0, 1.0, 3.0)]), Some(0));
        assert_eq!(pick_winner(&[]), None);
    }

    #[test]
    fn toml_merge_is_deep() {
        let mut base: toml::Value = toml::from_str("[a]\nx = 1\ny = 2\n[b]\nz = 3\n").unwrap();
        merge_toml(&mut base, toml::from_str("[a]\ny = 5\n").unwrap());
        assert_eq!(base["a"]["x"].as_integer(), Some(1));
        assert_eq!(base["a"]["y"].as_integer(), Some(5));
        assert_eq!(base["b"]["z"].as_integer(), Some(3));
    }

    #[test]
    fn file_overrides_sit_under_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.toml");
        fs::write(
            &path,
            "scenario = \"maze\"\nconfig_id = \"aug-DWA-3\"\nrepeats = 3\n[planner]\ngamma = 7.5\n[noise]\nseed = 11\n",
        )
        .unwrap();
        let file = FileSettings::load(Some(&path)).unwrap();
        assert_eq!(file.scenario.as_deref(), Some("maze"));
        assert_eq!(file.config_id, Some(ConfigId::AugDwa3));
        let common = CommonArgs {
            scenario: None,
            repeats: Some(5),
            seed: None,
            noise_sigma: Some(0.0),
            config_file: None,
            strict: false,
        };
        let cfg = file.experiment_config(ConfigId::AugDwa3, &common).unwrap();
        assert_eq!(cfg.repeats, 5);
        assert_eq!(cfg.noise.seed, 11);
        assert_eq!(cfg.noise.velocity_noise_sigma, 0.0);
        assert_eq!(cfg.planner.gamma, 7.5);
        // The preset survives a file that does not mention it.
        assert_eq!(cfg.planner.scoring_mode, ScoringMode::Simple);

        fs::write(&path, "[planner]\ngama = 1.0\n").unwrap();
        let file = FileSettings::load(Some(&path)).unwrap();
        assert!(file.experiment_config(ConfigId::AugDwa1, &common).is_err());
    }
}
