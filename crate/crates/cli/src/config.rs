//! TOML scenario, change and CIA input files.
//!
//! Parsing is strict: unknown keys are errors. Every error is reported as
//! `path:line:column: message`, pointing at the offending key when the file sets it.

use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use ralt_core::cert::{ChangeDescriptor, CiaNotes, ClassificationRules, EvidenceLink, MocRow};
use ralt_core::compliance::{log_grid, DivergenceLimit, ProfileShape, Scenario, UnitConfig};
use ralt_core::{BandPlan, ChirpConfig, FilterSpec, InterfererSpec, PropagationModel, ReceiverConfig};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::output::Format;

/// A configuration problem tied to a location in a file.
#[derive(Debug)]
pub struct ConfigError {
    pub path: PathBuf,
    /// 1-based line and column, when the problem maps to text in the file.
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((line, col)) => write!(f, "{}:{line}:{col}: {}", self.path.display(), self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct UnitSection {
    filter_installed: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    min_ft: f64,
    max_ft: f64,
    points: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SweepSection {
    altitudes_ft: Option<Vec<f64>>,
    grid: Option<GridSection>,
    trials_per_point: Option<usize>,
    seed: Option<u64>,
    pass_rate: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct EchoSection {
    terrain_reflectivity_loss_db: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSection {
    from_ft: f64,
    to_ft: f64,
    steps: usize,
    #[serde(default = "default_shape")]
    shape: ProfileShape,
}

fn default_shape() -> ProfileShape {
    ProfileShape::Exponential
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    pub a: UnitConfig,
    pub b: UnitConfig,
    profile: ProfileSection,
    pub limit: DivergenceLimit,
}

impl CompareSection {
    pub fn profile_ft(&self) -> ralt_core::Result<Vec<f64>> {
        let p = &self.profile;
        ralt_core::compliance::descent_profile(p.from_ft, p.to_ft, p.steps, p.shape)
    }
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScenarioFile {
    band_plan: Option<BandPlan>,
    chirp: Option<ChirpConfig>,
    receiver: Option<ReceiverConfig>,
    unit: UnitSection,
    filter: Option<FilterSpec>,
    interferers: Vec<InterfererSpec>,
    propagation: Option<PropagationModel>,
    echo: EchoSection,
    sweep: SweepSection,
    compare: Option<CompareSection>,
    output: OutputSection,
}

/// A scenario file resolved against the defaults.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub pass_rate: f64,
    pub compare: Option<CompareSection>,
    pub output: OutputSection,
    pub source: Source,
}

/// Source text kept around so late validation errors can still be located.
#[derive(Debug, Clone)]
pub struct Source {
    pub path: PathBuf,
    text: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.to_path_buf(),
            position: None,
            message: format!("cannot read: {e}"),
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            text,
        })
    }

    /// Built-in defaults, no file behind them.
    pub fn builtin() -> Self {
        Self {
            path: PathBuf::from("<defaults>"),
            text: String::new(),
        }
    }

    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, col)
    }

    fn parse<T: DeserializeOwned>(&self) -> Result<T, ConfigError> {
        toml::from_str(&self.text).map_err(|e| ConfigError {
            path: self.path.clone(),
            position: e.span().map(|s| self.position(s.start)),
            message: e.message().trim_end().to_string(),
        })
    }

    /// Attribute a core validation error to the key it names.
    pub fn attribute(&self, err: ralt_core::Error) -> ConfigError {
        let position = match &err {
            ralt_core::Error::Config { field, .. } => self.locate(field),
            _ => None,
        };
        ConfigError {
            path: self.path.clone(),
            position,
            message: err.to_string(),
        }
    }

    /// Line and column of the deepest part of a dotted key path (`interferers[1].eirp_dbm`)
    /// present in the file.
    pub fn locate(&self, key_path: &str) -> Option<(usize, usize)> {
        let doc = toml::de::DeTable::parse(&self.text).ok()?;
        let mut span: Option<Range<usize>> = None;
        let mut table = doc.get_ref();
        let mut segments = key_path.split('.').peekable();
        while let Some(seg) = segments.next() {
            let (name, index) = split_index(seg);
            let Some((key, value)) = table.get_key_value(name) else {
                break;
            };
            span = Some(key.span());
            let mut value = value;
            if let Some(i) = index {
                match value.get_ref() {
                    toml::de::DeValue::Array(items) if i < items.len() => {
                        value = &items[i];
                        span = Some(value.span());
                    }
                    _ => break,
                }
            }
            match value.get_ref() {
                toml::de::DeValue::Table(t) if segments.peek().is_some() => table = t,
                _ => break,
            }
        }
        span.map(|s| self.position(s.start))
    }
}

fn split_index(seg: &str) -> (&str, Option<usize>) {
    match seg.split_once('[') {
        Some((name, rest)) => (name, rest.trim_end_matches(']').parse().ok()),
        None => (seg, None),
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub no_filter: bool,
}

pub fn load_scenario(path: Option<&Path>, overrides: Overrides) -> Result<LoadedScenario, ConfigError> {
    let source = match path {
        Some(p) => Source::read(p)?,
        None => Source::builtin(),
    };
    let file: ScenarioFile = source.parse()?;
    let mut s = Scenario::default();
    if let Some(v) = file.band_plan {
        s.band_plan = v;
    }
    if let Some(v) = file.chirp {
        s.chirp = v;
    }
    if let Some(v) = file.receiver {
        s.receiver = v;
    }
    if let Some(v) = file.filter {
        s.filter = Some(v);
    }
    s.interferers = file.interferers;
    if let Some(v) = file.propagation {
        s.propagation = v;
    }
    if let Some(v) = file.echo.terrain_reflectivity_loss_db {
        s.terrain_reflectivity_loss_db = v;
    }
    let sweep = file.sweep;
    let fail = |key: &str, message: String| ConfigError {
        path: source.path.clone(),
        position: source.locate(key),
        message,
    };
    match (sweep.altitudes_ft, sweep.grid) {
        (Some(_), Some(_)) => {
            return Err(fail("sweep.grid", "set `altitudes_ft` or `grid`, not both".into()));
        }
        (Some(a), None) => s.altitudes_ft = a,
        (None, Some(g)) => {
            s.altitudes_ft = log_grid(g.min_ft, g.max_ft, g.points)
                .map_err(|e| fail("sweep.grid", e.to_string()))?;
        }
        (None, None) => {}
    }
    if let Some(v) = sweep.trials_per_point {
        s.trials_per_point = v;
    }
    if let Some(v) = sweep.seed {
        s.seed = v;
    }
    let pass_rate = sweep.pass_rate.unwrap_or(0.95);
    if !(0.0..=1.0).contains(&pass_rate) {
        return Err(fail("sweep.pass_rate", format!("{pass_rate} outside [0, 1]")));
    }

    if let Some(v) = overrides.seed {
        s.seed = v;
    }
    if let Some(v) = overrides.trials {
        s.trials_per_point = v;
    }
    if overrides.no_filter || file.unit.filter_installed == Some(false) {
        s = s.without_filter();
    }
    s.validate().map_err(|e| source.attribute(e))?;
    if let Some(c) = &file.compare {
        for (key, unit) in [("compare.a", &c.a), ("compare.b", &c.b)] {
            if let Some(f) = &unit.filter {
                f.validate().map_err(|e| fail(key, format!("unit `{}`: {e}", unit.name)))?;
            }
        }
        c.profile_ft().map_err(|e| fail("compare.profile", e.to_string()))?;
    }
    Ok(LoadedScenario {
        scenario: s,
        pass_rate,
        compare: file.compare,
        output: file.output,
        source,
    })
}

pub fn load_change(path: &Path) -> Result<ChangeDescriptor, ConfigError> {
    let source = Source::read(path)?;
    let change: ChangeDescriptor = source.parse()?;
    change.validate().map_err(|e| source.attribute(e))?;
    Ok(change)
}

/// Inputs to a change impact analysis.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CiaInputs {
    pub change: ChangeDescriptor,
    #[serde(default)]
    pub rules: ClassificationRules,
    #[serde(default)]
    pub notes: CiaNotes,
    /// Means-of-compliance rows; the default matrix when absent.
    #[serde(default)]
    pub moc: Option<Vec<MocRow>>,
    #[serde(default)]
    pub evidence: Vec<EvidenceLink>,
}

pub fn load_cia_inputs(path: &Path) -> Result<(CiaInputs, Source), ConfigError> {
    let source = Source::read(path)?;
    let inputs: CiaInputs = source.parse()?;
    Ok((inputs, source))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn source(text: &str) -> Source {
        Source {
            path: "s.toml".into(),
            text: text.into(),
        }
    }

    #[test]
    fn locate_descends_into_arrays_of_tables() {
        let s = source("[chirp]\ntx_power_dbm = 20\n\n[[interferers]]\nname = \"a\"\n\n[[interferers]]\nname = \"b\"\neirp_dbm = 1\n");
        assert_eq!(s.locate("chirp.tx_power_dbm"), Some((2, 1)));
        assert_eq!(s.locate("interferers[1].eirp_dbm"), Some((9, 1)));
        assert_eq!(s.locate("interferers[0].eirp_dbm"), Some((4, 1)));
        assert_eq!(s.locate("receiver.noise_figure_db"), None);
    }

    #[test]
    fn locate_points_into_inline_arrays() {
        let s = source("[sweep]\naltitudes_ft = [10.0, 1.0]\n");
        assert_eq!(s.locate("sweep.altitudes_ft[1]"), Some((2, 23)));
    }

    #[test]
    fn unknown_key_is_located() {
        let e = source("[chirp]\ntx_power_dbm = 20\nbogus = 1\n").parse::<ScenarioFile>().unwrap_err();
        assert_eq!(e.position.map(|p| p.0), Some(3));
        assert!(e.message.contains("bogus"), "{}", e.message);
    }
}
