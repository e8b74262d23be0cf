//! Accuracy requirements, Monte Carlo sweeps, dual-unit comparison and compliance reports.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fmcw::{
    estimate_altitude, synthesize_dechirped, AltimeterOutput, ChirpConfig, EchoChannel,
    ReceiverConfig,
};
use crate::interference::{inband_injection, InterfererSpec, PropagationModel};
use crate::json;
use crate::seed;
use crate::spectrum::{BandPlan, FilterSpec};
use crate::units::{ft_to_m, m_to_ft};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Lowest altitude covered by the accuracy table, ft.
pub const TABLE_FLOOR_FT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "value", rename_all = "snake_case")]
pub enum ToleranceRule {
    /// Plus/minus a fixed number of feet.
    AbsoluteFt(f64),
    /// Plus/minus a percentage of the altitude.
    Percent(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub from_ft: f64,
    /// Exclusive upper bound; `None` for the open-ended last row.
    pub to_ft: Option<f64>,
    pub rule: ToleranceRule,
}

/// Altitude-dependent accuracy requirement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyTable {
    pub rows: Vec<AccuracyRow>,
}

impl Default for AccuracyTable {
    /// 3-100 ft: 3 ft; 100-500 ft: 3 %; 500 ft and above: 5 %.
    fn default() -> Self {
        Self {
            rows: vec![
                AccuracyRow {
                    from_ft: 3.0,
                    to_ft: Some(100.0),
                    rule: ToleranceRule::AbsoluteFt(3.0),
                },
                AccuracyRow {
                    from_ft: 100.0,
                    to_ft: Some(500.0),
                    rule: ToleranceRule::Percent(3.0),
                },
                AccuracyRow {
                    from_ft: 500.0,
                    to_ft: None,
                    rule: ToleranceRule::Percent(5.0),
                },
            ],
        }
    }
}

impl AccuracyTable {
    /// Rows must partition `[3 ft, inf)` in order, without gaps or overlaps.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let mut expected_from = TABLE_FLOOR_FT;
        for (i, row) in self.rows.iter().enumerate() {
            if row.from_ft != expected_from {
                problems.push(format!("row {i} starts at {} ft, expected {expected_from} ft", row.from_ft));
            }
            match row.to_ft {
                Some(to) if to <= row.from_ft => problems.push(format!("row {i} is empty")),
                Some(to) if i + 1 == self.rows.len() => {
                    problems.push(format!("last row ends at {to} ft; table must be open-ended"))
                }
                Some(to) => expected_from = to,
                None if i + 1 != self.rows.len() => {
                    problems.push(format!("row {i} is open-ended but not last"))
                }
                None => {}
            }
        }
        if self.rows.is_empty() {
            problems.push("table has no rows".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Allowed absolute error at `altitude_ft`, in feet.
    pub fn tolerance_at(&self, altitude_ft: f64) -> Result<f64> {
        if !(altitude_ft >= TABLE_FLOOR_FT) {
            return Err(Error::Domain(format!(
                "altitude {altitude_ft} ft is below the accuracy table ({TABLE_FLOOR_FT} ft)"
            )));
        }
        let row = self
            .rows
            .iter()
            .find(|r| altitude_ft >= r.from_ft && r.to_ft.is_none_or(|to| altitude_ft < to))
            .ok_or_else(|| Error::Domain(format!("no accuracy row covers {altitude_ft} ft")))?;
        Ok(match row.rule {
            ToleranceRule::AbsoluteFt(ft) => ft,
            ToleranceRule::Percent(pct) => altitude_ft * pct / 100.0,
        })
    }
}

/// `n` log-spaced altitudes from `min_ft` to `max_ft` inclusive.
pub fn log_grid(min_ft: f64, max_ft: f64, n: usize) -> Result<Vec<f64>> {
    if !(min_ft > 0.0 && max_ft > min_ft) || n < 2 {
        return Err(Error::Domain(format!(
            "log grid needs 0 < min < max and n >= 2, got [{min_ft}, {max_ft}] x {n}"
        )));
    }
    let ratio = (max_ft / min_ft).ln();
    let mut grid: Vec<f64> = (0..n)
        .map(|i| min_ft * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid[0] = min_ft;
    grid[n - 1] = max_ft;
    Ok(grid)
}

/// Everything needed to reproduce a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub band_plan: BandPlan,
    pub chirp: ChirpConfig,
    pub receiver: ReceiverConfig,
    /// `None` models the unmodified unit.
    pub filter: Option<FilterSpec>,
    pub interferers: Vec<InterfererSpec>,
    pub propagation: PropagationModel,
    /// Echo reflection loss, dB; `inf` removes the echo.
    pub terrain_reflectivity_loss_db: f64,
    pub altitudes_ft: Vec<f64>,
    pub trials_per_point: usize,
    pub seed: u64,
}

impl Default for Scenario {
    /// Filter installed and compensated, no interferers, 25 log-spaced altitudes from 3 to
    /// 2500 ft, 200 trials each.
    fn default() -> Self {
        Self {
            band_plan: BandPlan::default(),
            chirp: ChirpConfig::default(),
            receiver: ReceiverConfig::default(),
            filter: Some(FilterSpec::default()),
            interferers: Vec::new(),
            propagation: PropagationModel::default(),
            terrain_reflectivity_loss_db: 10.0,
            altitudes_ft: log_grid(3.0, 2500.0, 25).expect("static grid"),
            trials_per_point: 200,
            seed: 1,
        }
    }
}

impl Scenario {
    /// Same scenario on the legacy unit: no filter and no compensating gain.
    pub fn without_filter(&self) -> Self {
        let mut s = self.clone();
        s.filter = None;
        s.receiver.gain_compensation_db = 0.0;
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.chirp.validate(&self.band_plan)?;
        self.receiver.validate()?;
        if let Some(f) = &self.filter {
            f.validate()?;
        }
        for (i, intf) in self.interferers.iter().enumerate() {
            intf.validate(i, &self.band_plan, &self.receiver)?;
        }
        if self.terrain_reflectivity_loss_db.is_nan() || self.terrain_reflectivity_loss_db < 0.0 {
            return Err(Error::config("echo.terrain_reflectivity_loss_db", "must be >= 0"));
        }
        if self.trials_per_point < 1 {
            return Err(Error::config("sweep.trials_per_point", "must be >= 1"));
        }
        if self.altitudes_ft.is_empty() {
            return Err(Error::config("sweep.altitudes_ft", "at least one altitude"));
        }
        let ceiling = self.chirp.altitude_ceiling_ft;
        for (i, &a) in self.altitudes_ft.iter().enumerate() {
            if !(TABLE_FLOOR_FT..=ceiling).contains(&a) {
                return Err(Error::config(
                    format!("sweep.altitudes_ft[{i}]"),
                    format!("{a} ft outside [{TABLE_FLOOR_FT}, {ceiling}] ft"),
                ));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding (configuration and seed).
    pub fn fingerprint(&self) -> String {
        let bytes = json::canonical_bytes(self).expect("scenario serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Run one trial at `altitude_ft` with an explicit trial seed.
    pub fn run_trial(&self, altitude_ft: f64, trial_seed: u64) -> Result<AltimeterOutput> {
        let samples = self.trial_samples(altitude_ft, trial_seed)?;
        estimate_altitude(&samples, &self.chirp, &self.receiver)
    }

    /// Dechirped baseband (zero-padded to the FFT length) that [`Scenario::run_trial`] estimates from.
    pub fn trial_samples(&self, altitude_ft: f64, trial_seed: u64) -> Result<Vec<Complex64>> {
        let h = ft_to_m(altitude_ft);
        let channel = EchoChannel::new(h, self.terrain_reflectivity_loss_db)?;
        let injected = inband_injection(
            &self.interferers,
            self.filter.as_ref(),
            &self.chirp,
            &self.receiver,
            h,
            &self.propagation,
            trial_seed,
        )?;
        synthesize_dechirped(
            &self.chirp,
            &channel,
            &self.receiver,
            self.filter.as_ref(),
            &injected,
            trial_seed,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialClass {
    WithinTolerance,
    /// Valid output outside tolerance.
    Erroneous,
    Ncd,
}

impl TrialClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TrialClass::WithinTolerance => "within_tolerance",
            TrialClass::Erroneous => "erroneous",
            TrialClass::Ncd => "ncd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub altitude_index: usize,
    pub trial: usize,
    pub true_altitude_ft: f64,
    pub output: AltimeterOutput,
    /// Estimate minus truth, ft; present for valid outputs.
    pub error_ft: Option<f64>,
    pub class: TrialClass,
}

impl TrialResult {
    pub fn within_tolerance(&self) -> bool {
        self.class == TrialClass::WithinTolerance
    }

    pub fn erroneous(&self) -> bool {
        self.class == TrialClass::Erroneous
    }

    pub fn ncd(&self) -> bool {
        self.class == TrialClass::Ncd
    }

    pub fn estimate_ft(&self) -> Option<f64> {
        self.output.altitude_estimate_m.map(m_to_ft)
    }
}

/// Classify one output against the table.
pub fn classify_output(
    output: &AltimeterOutput,
    true_altitude_ft: f64,
    table: &AccuracyTable,
) -> Result<(Option<f64>, TrialClass)> {
    let tol = table.tolerance_at(true_altitude_ft)?;
    Ok(match output.altitude_estimate_m {
        None => (None, TrialClass::Ncd),
        Some(m) => {
            let err = m_to_ft(m) - true_altitude_ft;
            let class = if err.abs() <= tol {
                TrialClass::WithinTolerance
            } else {
                TrialClass::Erroneous
            };
            (Some(err), class)
        }
    })
}

/// Run every (altitude, trial) pair of the scenario.
///
/// Trials run in parallel; each derives its seed from `(seed, altitude index, trial)`, and
/// results come back in grid order, so the output is independent of scheduling.
pub fn run_sweep(scenario: &Scenario, table: &AccuracyTable) -> Result<Vec<TrialResult>> {
    scenario.validate()?;
    let n = scenario.trials_per_point;
    (0..scenario.altitudes_ft.len() * n)
        .into_par_iter()
        .map(|k| {
            let (point, trial) = (k / n, k % n);
            let alt = scenario.altitudes_ft[point];
            let annotate = |e: Error| Error::Trial {
                altitude_ft: alt,
                trial,
                source: Box::new(e),
            };
            let output = scenario
                .run_trial(alt, seed::trial_seed(scenario.seed, point, trial))
                .map_err(annotate)?;
            let (error_ft, class) = classify_output(&output, alt, table).map_err(annotate)?;
            Ok(TrialResult {
                altitude_index: point,
                trial,
                true_altitude_ft: alt,
                output,
                error_ft,
                class,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub altitude_ft: f64,
    pub tolerance_ft: f64,
    pub trials: usize,
    pub within_tolerance: usize,
    pub erroneous: usize,
    pub ncd: usize,
    pub pass_rate: f64,
    pub ncd_rate: f64,
    pub erroneous_rate: f64,
    /// Largest absolute error among valid outputs, ft.
    pub max_abs_error_ft: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplianceReport {
    pub tool_version: String,
    pub scenario_fingerprint: String,
    /// Required within-tolerance fraction per altitude point.
    pub required_pass_rate: f64,
    pub points: Vec<PointSummary>,
    pub failing_altitudes_ft: Vec<f64>,
    pub verdict: Verdict,
}

impl ComplianceReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn total_ncd(&self) -> usize {
        self.points.iter().map(|p| p.ncd).sum()
    }

    pub fn total_erroneous(&self) -> usize {
        self.points.iter().map(|p| p.erroneous).sum()
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        json::canonical_bytes(self)
    }
}

/// Aggregate trial results per altitude.
///
/// A point passes when its within-tolerance rate reaches `pass_rate` and it has no
/// erroneous (valid but out-of-tolerance) trial. The verdict passes when every point does.
pub fn check_compliance(
    results: &[TrialResult],
    table: &AccuracyTable,
    pass_rate: f64,
    scenario_fingerprint: &str,
) -> Result<ComplianceReport> {
    if results.is_empty() {
        return Err(Error::Contract("no trial results to aggregate".into()));
    }
    if !(0.0..=1.0).contains(&pass_rate) {
        return Err(Error::config("pass_rate", "must lie in [0, 1]"));
    }
    let mut by_point: BTreeMap<usize, Vec<&TrialResult>> = BTreeMap::new();
    for r in results {
        by_point.entry(r.altitude_index).or_default().push(r);
    }
    let mut points = Vec::with_capacity(by_point.len());
    for trials in by_point.values() {
        let alt = trials[0].true_altitude_ft;
        let count = |c: TrialClass| trials.iter().filter(|t| t.class == c).count();
        let n = trials.len();
        let within = count(TrialClass::WithinTolerance);
        let erroneous = count(TrialClass::Erroneous);
        let ncd = count(TrialClass::Ncd);
        let rate = within as f64 / n as f64;
        let max_abs_error_ft = trials
            .iter()
            .filter_map(|t| t.error_ft.map(f64::abs))
            .max_by(f64::total_cmp);
        points.push(PointSummary {
            altitude_ft: alt,
            tolerance_ft: table.tolerance_at(alt)?,
            trials: n,
            within_tolerance: within,
            erroneous,
            ncd,
            pass_rate: rate,
            ncd_rate: ncd as f64 / n as f64,
            erroneous_rate: erroneous as f64 / n as f64,
            max_abs_error_ft,
            passed: rate >= pass_rate && erroneous == 0,
        });
    }
    let failing: Vec<f64> = points.iter().filter(|p| !p.passed).map(|p| p.altitude_ft).collect();
    Ok(ComplianceReport {
        tool_version: TOOL_VERSION.into(),
        scenario_fingerprint: scenario_fingerprint.into(),
        required_pass_rate: pass_rate,
        points,
        verdict: if failing.is_empty() { Verdict::Pass } else { Verdict::Fail },
        failing_altitudes_ft: failing,
    })
}

/// Per-trial CSV: `altitude_ft,trial,estimate_ft,error_ft,snr_db,classification`.
pub fn trials_csv(results: &[TrialResult]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let io = |e: csv::Error| Error::Serialization(e.to_string());
    w.write_record(["altitude_ft", "trial", "estimate_ft", "error_ft", "snr_db", "classification"])
        .map_err(io)?;
    for r in results {
        w.write_record([
            r.true_altitude_ft.to_string(),
            r.trial.to_string(),
            opt(r.estimate_ft()),
            opt(r.error_ft),
            r.output.snr_db.to_string(),
            r.class.as_str().to_string(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Serialization(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ProfileShape {
    #[default]
    Linear,
    /// Geometric spacing: constant ratio between consecutive altitudes.
    Exponential,
}

/// Strictly decreasing altitudes from `ceiling_ft` down to `floor_ft`, endpoints included.
pub fn descent_profile(
    ceiling_ft: f64,
    floor_ft: f64,
    steps: usize,
    shape: ProfileShape,
) -> Result<Vec<f64>> {
    if !(floor_ft >= TABLE_FLOOR_FT && ceiling_ft > floor_ft && ceiling_ft.is_finite()) {
        return Err(Error::Domain(format!(
            "descent needs ceiling > floor >= {TABLE_FLOOR_FT} ft, got {ceiling_ft} -> {floor_ft}"
        )));
    }
    if steps < 2 {
        return Err(Error::Domain(format!("descent needs at least 2 steps, got {steps}")));
    }
    let last = (steps - 1) as f64;
    let mut out: Vec<f64> = (0..steps)
        .map(|i| {
            let x = i as f64 / last;
            match shape {
                ProfileShape::Linear => ceiling_ft + (floor_ft - ceiling_ft) * x,
                ProfileShape::Exponential => ceiling_ft * (floor_ft / ceiling_ft).powf(x),
            }
        })
        .collect();
    out[0] = ceiling_ft;
    out[steps - 1] = floor_ft;
    Ok(out)
}

/// One altimeter of a dual installation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitConfig {
    pub name: String,
    /// Filter fitted to this unit; `None` for the legacy unit.
    #[serde(default)]
    pub filter: Option<FilterSpec>,
    #[serde(default)]
    pub gain_compensation_db: f64,
}

impl UnitConfig {
    /// Unmodified unit: no filter, no compensation.
    pub fn legacy(name: &str) -> Self {
        Self {
            name: name.into(),
            filter: None,
            gain_compensation_db: 0.0,
        }
    }

    /// Modified unit with `filter`, its insertion loss compensated in gain.
    pub fn modified(name: &str, filter: FilterSpec) -> Self {
        Self {
            name: name.into(),
            gain_compensation_db: filter.insertion_loss_db,
            filter: Some(filter),
        }
    }

    fn apply(&self, base: &Scenario) -> Scenario {
        let mut s = base.clone();
        s.filter = self.filter.clone();
        s.receiver.gain_compensation_db = self.gain_compensation_db;
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DivergenceLimit {
    Feet(f64),
    /// Percent of the true altitude.
    Percent(f64),
}

impl DivergenceLimit {
    pub fn at(&self, altitude_ft: f64) -> f64 {
        match *self {
            DivergenceLimit::Feet(ft) => ft,
            DivergenceLimit::Percent(p) => altitude_ft * p / 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonStep {
    pub step: usize,
    pub true_altitude_ft: f64,
    pub a_estimate_ft: Option<f64>,
    pub b_estimate_ft: Option<f64>,
    pub a_class: TrialClass,
    pub b_class: TrialClass,
    /// `|a - b|` when both units are valid.
    pub divergence_ft: Option<f64>,
    pub limit_ft: f64,
    pub ncd_disagreement: bool,
    pub exceeds_limit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub tool_version: String,
    pub scenario_fingerprint: String,
    pub unit_a: String,
    pub unit_b: String,
    pub max_divergence: DivergenceLimit,
    pub steps: Vec<ComparisonStep>,
    pub max_observed_divergence_ft: f64,
    pub ncd_disagreements: usize,
    pub exceedances: usize,
    pub a_within_tolerance: usize,
    pub b_within_tolerance: usize,
    pub verdict: Verdict,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        json::canonical_bytes(self)
    }

    /// Per-step CSV.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Serialization(e.to_string());
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            "step",
            "true_altitude_ft",
            "a_estimate_ft",
            "b_estimate_ft",
            "a_class",
            "b_class",
            "divergence_ft",
            "limit_ft",
            "ncd_disagreement",
            "exceeds_limit",
        ])
        .map_err(io)?;
        for s in &self.steps {
            w.write_record([
                s.step.to_string(),
                s.true_altitude_ft.to_string(),
                opt(s.a_estimate_ft),
                opt(s.b_estimate_ft),
                s.a_class.as_str().into(),
                s.b_class.as_str().into(),
                opt(s.divergence_ft),
                s.limit_ft.to_string(),
                s.ncd_disagreement.to_string(),
                s.exceeds_limit.to_string(),
            ])
            .map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Compare two recorded output streams against a shared truth profile.
pub fn compare_outputs(
    truth_ft: &[f64],
    a: &[AltimeterOutput],
    b: &[AltimeterOutput],
    limit: DivergenceLimit,
    table: &AccuracyTable,
) -> Result<Vec<ComparisonStep>> {
    if a.len() != truth_ft.len() || b.len() != truth_ft.len() {
        return Err(Error::Contract(format!(
            "profile has {} steps but units reported {} and {}",
            truth_ft.len(),
            a.len(),
            b.len()
        )));
    }
    truth_ft
        .iter()
        .zip(a.iter().zip(b))
        .enumerate()
        .map(|(step, (&truth, (oa, ob)))| {
            let (_, a_class) = classify_output(oa, truth, table)?;
            let (_, b_class) = classify_output(ob, truth, table)?;
            let a_est = oa.altitude_estimate_m.map(m_to_ft);
            let b_est = ob.altitude_estimate_m.map(m_to_ft);
            let divergence = a_est.zip(b_est).map(|(x, y)| (x - y).abs());
            let limit_ft = limit.at(truth);
            Ok(ComparisonStep {
                step,
                true_altitude_ft: truth,
                a_estimate_ft: a_est,
                b_estimate_ft: b_est,
                a_class,
                b_class,
                divergence_ft: divergence,
                limit_ft,
                ncd_disagreement: oa.is_valid() != ob.is_valid(),
                exceeds_limit: divergence.is_some_and(|d| d > limit_ft),
            })
        })
        .collect()
}

/// Fly both units down `profile` with paired seeds and compare their outputs.
///
/// Both units share the environment (interferers, chirp, receiver) of `base`; they differ
/// only in filter and gain compensation. Step `i` uses the same trial seed for both.
pub fn dual_comparison(
    base: &Scenario,
    profile_ft: &[f64],
    unit_a: &UnitConfig,
    unit_b: &UnitConfig,
    limit: DivergenceLimit,
    table: &AccuracyTable,
) -> Result<ComparisonReport> {
    let sa = unit_a.apply(base);
    let sb = unit_b.apply(base);
    sa.validate()?;
    sb.validate()?;
    let fly = |s: &Scenario| -> Result<Vec<AltimeterOutput>> {
        profile_ft
            .par_iter()
            .enumerate()
            .map(|(i, &alt)| {
                s.run_trial(alt, seed::trial_seed(base.seed, i, 0)).map_err(|e| Error::Trial {
                    altitude_ft: alt,
                    trial: i,
                    source: Box::new(e),
                })
            })
            .collect()
    };
    let steps = compare_outputs(profile_ft, &fly(&sa)?, &fly(&sb)?, limit, table)?;

    let exceedances = steps.iter().filter(|s| s.exceeds_limit).count();
    let count_within = |f: fn(&ComparisonStep) -> TrialClass| {
        steps.iter().filter(|s| f(s) == TrialClass::WithinTolerance).count()
    };
    #[derive(Serialize)]
    struct Fingerprinted<'a> {
        base: &'a Scenario,
        profile_ft: &'a [f64],
        unit_a: &'a UnitConfig,
        unit_b: &'a UnitConfig,
        limit: DivergenceLimit,
    }
    let fp = json::canonical_bytes(&Fingerprinted {
        base,
        profile_ft,
        unit_a,
        unit_b,
        limit,
    })?;
    Ok(ComparisonReport {
        tool_version: TOOL_VERSION.into(),
        scenario_fingerprint: hex::encode(Sha256::digest(&fp)),
        unit_a: unit_a.name.clone(),
        unit_b: unit_b.name.clone(),
        max_divergence: limit,
        max_observed_divergence_ft: steps
            .iter()
            .filter_map(|s| s.divergence_ft)
            .fold(0.0, f64::max),
        ncd_disagreements: steps.iter().filter(|s| s.ncd_disagreement).count(),
        exceedances,
        a_within_tolerance: count_within(|s| s.a_class),
        b_within_tolerance: count_within(|s| s.b_class),
        verdict: if exceedances == 0 { Verdict::Pass } else { Verdict::Fail },
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmcw::Validity;

    fn output(alt_ft: Option<f64>) -> AltimeterOutput {
        AltimeterOutput {
            altitude_estimate_m: alt_ft.map(ft_to_m),
            snr_db: if alt_ft.is_some() { 40.0 } else { 3.0 },
            validity: if alt_ft.is_some() { Validity::Valid } else { Validity::NoComputedData },
            peak_bin: 0,
            interpolated_offset: 0.0,
            peak_frequency_hz: 0.0,
        }
    }

    fn result(point: usize, alt: f64, est: Option<f64>) -> TrialResult {
        let t = AccuracyTable::default();
        let out = output(est);
        let (error_ft, class) = classify_output(&out, alt, &t).unwrap();
        TrialResult {
            altitude_index: point,
            trial: 0,
            true_altitude_ft: alt,
            output: out,
            error_ft,
            class,
        }
    }

    #[test]
    fn tolerance_examples() {
        let t = AccuracyTable::default();
        t.validate().unwrap();
        assert_eq!(t.tolerance_at(50.0).unwrap(), 3.0);
        assert_eq!(t.tolerance_at(200.0).unwrap(), 6.0);
        assert_eq!(t.tolerance_at(1000.0).unwrap(), 50.0);
        assert_eq!(t.tolerance_at(3.0).unwrap(), 3.0);
        assert!(matches!(t.tolerance_at(2.99), Err(Error::Domain(_))));
    }

    #[test]
    fn tolerance_continuous_at_100_jumps_at_500() {
        let t = AccuracyTable::default();
        assert_eq!(t.tolerance_at(100.0 - 1e-9).unwrap(), 3.0);
        assert_eq!(t.tolerance_at(100.0).unwrap(), 3.0);
        assert!((t.tolerance_at(500.0 - 1e-9).unwrap() - 15.0).abs() < 1e-9);
        assert_eq!(t.tolerance_at(500.0).unwrap(), 25.0);
    }

    #[test]
    fn table_validation_rejects_gaps() {
        let mut t = AccuracyTable::default();
        t.rows[1].from_ft = 120.0;
        assert!(t.validate().is_err());
        let mut closed = AccuracyTable::default();
        closed.rows[2].to_ft = Some(5000.0);
        assert!(closed.validate().is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(3.0, 2500.0, 25).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], 3.0);
        assert_eq!(g[24], 2500.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let r = g[1] / g[0];
        assert!(g.windows(2).all(|w| (w[1] / w[0] - r).abs() < 1e-9));
    }

    #[test]
    fn trichotomy_and_compliance_logic() {
        let t = AccuracyTable::default();
        let all_good: Vec<_> = (0..10).map(|_| result(0, 50.0, Some(51.0))).collect();
        let rep = check_compliance(&all_good, &t, 0.95, "fp").unwrap();
        assert!(rep.passed());

        // 94 % within, rest NCD: fails a 0.95 criterion at that point only
        let mut rs: Vec<_> = (0..94).map(|_| result(0, 200.0, Some(201.0))).collect();
        rs.extend((0..6).map(|_| result(0, 200.0, None)));
        rs.extend((0..100).map(|_| result(1, 1000.0, Some(1010.0))));
        let rep = check_compliance(&rs, &t, 0.95, "fp").unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.failing_altitudes_ft, vec![200.0]);
        assert_eq!(rep.points[0].pass_rate, 0.94);
        assert!(rep.points[1].passed);

        // a single erroneous trial fails regardless of rate
        let mut rs: Vec<_> = (0..99).map(|_| result(0, 50.0, Some(50.0))).collect();
        rs.push(result(0, 50.0, Some(60.0)));
        assert!(rs[99].erroneous());
        let rep = check_compliance(&rs, &t, 0.95, "fp").unwrap();
        assert!(!rep.passed());

        let single = [result(0, 3.0, Some(3.5))];
        let rep = check_compliance(&single, &t, 0.95, "fp").unwrap();
        assert!(rep.passed());
        assert_eq!(rep.points[0].pass_rate, 1.0);

        assert!(check_compliance(&[], &t, 0.95, "fp").is_err());
        for r in rs.iter().chain(&single) {
            let flags = [r.within_tolerance(), r.erroneous(), r.ncd()];
            assert_eq!(flags.iter().filter(|&&b| b).count(), 1);
        }
    }

    #[test]
    fn descent_profile_examples() {
        assert_eq!(descent_profile(100.0, 3.0, 2, ProfileShape::Linear).unwrap(), vec![100.0, 3.0]);
        let p = descent_profile(2500.0, 3.0, 50, ProfileShape::Linear).unwrap();
        let step: f64 = (3.0 - 2500.0) / 49.0;
        assert!((step + 50.959).abs() < 1e-3);
        assert!(p.windows(2).all(|w| (w[1] - w[0] - step).abs() < 1e-9));
        let e = descent_profile(2500.0, 3.0, 30, ProfileShape::Exponential).unwrap();
        assert!(e.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(*e.last().unwrap(), 3.0);
        assert!(descent_profile(3.0, 3.0, 5, ProfileShape::Linear).is_err());
        assert!(descent_profile(100.0, 2.0, 5, ProfileShape::Linear).is_err());
        assert!(descent_profile(100.0, 3.0, 1, ProfileShape::Linear).is_err());
    }

    #[test]
    fn compare_outputs_length_mismatch() {
        let t = AccuracyTable::default();
        let e = compare_outputs(&[100.0, 50.0], &[output(Some(100.0))], &[output(Some(100.0))], DivergenceLimit::Feet(1.0), &t);
        assert!(matches!(e, Err(Error::Contract(_))));
    }

    #[test]
    fn compare_outputs_flags() {
        let t = AccuracyTable::default();
        let steps = compare_outputs(
            &[100.0, 50.0, 20.0],
            &[output(Some(100.0)), output(None), output(Some(20.0))],
            &[output(Some(100.5)), output(Some(50.0)), output(Some(25.0))],
            DivergenceLimit::Feet(1.0),
            &t,
        )
        .unwrap();
        assert!(!steps[0].exceeds_limit);
        assert!(steps[1].ncd_disagreement && steps[1].divergence_ft.is_none());
        assert!(steps[2].exceeds_limit);
        assert_eq!(DivergenceLimit::Percent(2.0).at(500.0), 10.0);
    }

    #[test]
    fn scenario_validation() {
        let mut s = Scenario::default();
        s.validate().unwrap();
        s.altitudes_ft.push(2.0);
        assert_eq!(s.validate().unwrap_err().field(), Some("sweep.altitudes_ft[25]"));
        let mut s = Scenario::default();
        s.trials_per_point = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn fingerprint_tracks_config_and_seed() {
        let a = Scenario::default();
        assert_eq!(a.fingerprint(), Scenario::default().fingerprint());
        let mut b = a.clone();
        b.seed = 2;
        assert_ne!(a.fingerprint(), b.fingerprint());
        let mut c = a.clone();
        c.chirp.tx_power_dbm += 0.001;
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_ne!(a.fingerprint(), a.without_filter().fingerprint());
    }

    #[test]
    fn csv_columns() {
        let rs = [result(0, 50.0, Some(51.0)), result(0, 50.0, None)];
        let text = String::from_utf8(trials_csv(&rs).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "altitude_ft,trial,estimate_ft,error_ft,snr_db,classification");
        assert!(lines.next().unwrap().ends_with(",within_tolerance"));
        assert_eq!(lines.next().unwrap(), "50,0,,,3,ncd");
    }
}
