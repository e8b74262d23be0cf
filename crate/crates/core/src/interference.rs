//! 5G emitters and their effect on the altimeter receiver.
//!
//! Two interferer classes are modeled. Fundamental emissions sit outside the altimeter
//! band and act through front-end blocking (a noise-floor rise). Spurious emissions reach
//! the receiver inside its front-end response and are injected into the dechirped baseband,
//! either as noise of equal power spread across the analysis bandwidth or, in coherent
//! mode, as a fixed baseband tone that mimics a false altitude.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmcw::{beat_frequency_oracle, ChirpConfig, ReceiverConfig};
use crate::seed::{self, Stream};
use crate::spectrum::{filter_attenuation, BandPlan, FilterSpec, FrequencyBand};
use crate::units::{ft_to_m, lin_to_db, mw_to_dbm, dbm_to_mw, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfererClass {
    Fundamental,
    Spurious,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Geometry {
    FixedDistance { distance_m: f64 },
    /// Emitter directly below the aircraft; distance equals the current altitude.
    GroundBelow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpuriousTone {
    pub frequency_hz: f64,
    /// Tone EIRP, dBm.
    pub level_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpuriousShape {
    /// Flat EIRP density over the interferer's emission band.
    FlatNoisePsd { psd_dbm_hz: f64 },
    Tones { tones: Vec<SpuriousTone> },
}

/// How a spurious tone appears after dechirp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum InjectionMode {
    /// Equal-power noise spread uniformly across the baseband.
    #[default]
    Spread,
    /// Fixed baseband tone at the beat frequency of `false_altitude_ft`.
    Coherent { false_altitude_ft: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererSpec {
    #[serde(default)]
    pub name: String,
    pub emission_band: FrequencyBand,
    pub class: InterfererClass,
    /// Headline EIRP. Drives fundamental emitters; spurious components carry their own levels.
    pub eirp_dbm: f64,
    /// Linear power multiplier applied to every emitted component.
    #[serde(default = "one")]
    pub eirp_scale: f64,
    /// On-air fraction (TDD), applied as average power.
    #[serde(default = "one")]
    pub duty_cycle: f64,
    pub geometry: Geometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spurious: Option<SpuriousShape>,
    #[serde(default)]
    pub injection: InjectionMode,
}

fn one() -> f64 {
    1.0
}

impl InterfererSpec {
    /// A US C-band base station at `distance_m` with 62 dBm EIRP.
    pub fn us_fundamental(distance_m: f64) -> Self {
        Self {
            name: "us-5g-fundamental".into(),
            emission_band: BandPlan::default().us_5g,
            class: InterfererClass::Fundamental,
            eirp_dbm: 62.0,
            eirp_scale: 1.0,
            duty_cycle: 1.0,
            geometry: Geometry::FixedDistance { distance_m },
            spurious: None,
            injection: InjectionMode::Spread,
        }
    }

    /// Single spurious tone with the given EIRP.
    pub fn spurious_tone(frequency_hz: f64, level_dbm: f64, geometry: Geometry) -> Self {
        Self {
            name: "spurious-tone".into(),
            emission_band: FrequencyBand::new(frequency_hz - 1e6, frequency_hz + 1e6)
                .expect("tone frequency well above 1 MHz"),
            class: InterfererClass::Spurious,
            eirp_dbm: level_dbm,
            eirp_scale: 1.0,
            duty_cycle: 1.0,
            geometry,
            spurious: Some(SpuriousShape::Tones {
                tones: vec![SpuriousTone {
                    frequency_hz,
                    level_dbm,
                }],
            }),
            injection: InjectionMode::Spread,
        }
    }

    /// Check class and shape invariants. `index` is used for error key paths.
    pub fn validate(&self, index: usize, plan: &BandPlan, rx: &ReceiverConfig) -> Result<()> {
        let key = |k: &str| format!("interferers[{index}].{k}");
        if !self.eirp_dbm.is_finite() {
            return Err(Error::config(key("eirp_dbm"), "must be finite"));
        }
        if !(self.eirp_scale > 0.0 && self.eirp_scale.is_finite()) {
            return Err(Error::config(key("eirp_scale"), "must be positive"));
        }
        if !(self.duty_cycle > 0.0 && self.duty_cycle <= 1.0) {
            return Err(Error::config(key("duty_cycle"), "must be in (0, 1]"));
        }
        if let Geometry::FixedDistance { distance_m } = self.geometry {
            if !(distance_m > 0.0 && distance_m.is_finite()) {
                return Err(Error::config(key("geometry.distance_m"), "must be positive"));
            }
        }
        match self.class {
            InterfererClass::Fundamental => {
                if !self.emission_band.is_disjoint(&plan.ralt) {
                    return Err(Error::config(
                        key("emission_band"),
                        "fundamental emission overlaps the altimeter band",
                    ));
                }
                if self.spurious.is_some() {
                    return Err(Error::config(key("spurious"), "only valid for spurious class"));
                }
            }
            InterfererClass::Spurious => match &self.spurious {
                None => {
                    return Err(Error::config(key("spurious"), "required for spurious class"));
                }
                Some(SpuriousShape::FlatNoisePsd { psd_dbm_hz }) => {
                    if !psd_dbm_hz.is_finite() {
                        return Err(Error::config(key("spurious.psd_dbm_hz"), "must be finite"));
                    }
                    if !rx.front_end_band.contains_band(&self.emission_band) {
                        return Err(Error::config(
                            key("emission_band"),
                            "spurious density support outside the receiver front-end band",
                        ));
                    }
                }
                Some(SpuriousShape::Tones { tones }) => {
                    if tones.is_empty() {
                        return Err(Error::config(key("spurious.tones"), "at least one tone"));
                    }
                    for (j, t) in tones.iter().enumerate() {
                        if !rx.front_end_band.contains(t.frequency_hz) {
                            return Err(Error::config(
                                key(&format!("spurious.tones[{j}].frequency_hz")),
                                "tone outside the receiver front-end band",
                            ));
                        }
                        if !t.level_dbm.is_finite() {
                            return Err(Error::config(
                                key(&format!("spurious.tones[{j}].level_dbm")),
                                "must be finite",
                            ));
                        }
                    }
                }
            },
        }
        if let InjectionMode::Coherent { false_altitude_ft } = self.injection {
            if !(false_altitude_ft >= 0.0 && false_altitude_ft.is_finite()) {
                return Err(Error::config(key("injection.false_altitude_ft"), "must be >= 0"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PropagationKind {
    #[default]
    FreeSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationModel {
    pub model: PropagationKind,
    /// Frequency used for path loss; defaults to each interferer's band center.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_for_loss_hz: Option<f64>,
}

/// Free-space path loss `20 log10(4 pi d f / c)` in dB.
pub fn fspl(distance_m: f64, f_hz: f64) -> Result<f64> {
    if !(distance_m > 0.0) || !(f_hz > 0.0) {
        return Err(Error::Domain(format!(
            "path loss needs positive distance and frequency, got d={distance_m}, f={f_hz}"
        )));
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * distance_m * f_hz / SPEED_OF_LIGHT).log10())
}

fn resolve_distance(intf: &InterfererSpec, altitude_m: f64) -> Result<f64> {
    match intf.geometry {
        Geometry::FixedDistance { distance_m } => Ok(distance_m),
        Geometry::GroundBelow if altitude_m > 0.0 => Ok(altitude_m),
        Geometry::GroundBelow => Err(Error::Geometry(format!(
            "ground-below emitter `{}` at altitude {altitude_m} m",
            intf.name
        ))),
    }
}

/// Gain from emitted EIRP to power at the altimeter antenna, dB (negative).
///
/// Includes path loss, duty cycle and the EIRP scale.
pub fn path_gain_db(intf: &InterfererSpec, altitude_m: f64, prop: &PropagationModel) -> Result<f64> {
    let d = resolve_distance(intf, altitude_m)?;
    let carrier = prop.carrier_for_loss_hz.unwrap_or(intf.emission_band.center());
    let loss = match prop.model {
        PropagationKind::FreeSpace => fspl(d, carrier)?,
    };
    Ok(-loss + lin_to_db(intf.duty_cycle) + lin_to_db(intf.eirp_scale))
}

/// Headline EIRP propagated to the antenna, before any filter, dBm.
pub fn received_power(intf: &InterfererSpec, altitude_m: f64, prop: &PropagationModel) -> Result<f64> {
    Ok(intf.eirp_dbm + path_gain_db(intf, altitude_m, prop)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InbandKind {
    Tone { beat_hz: f64, phase: f64 },
    Noise,
}

/// One in-band contribution handed to the synthesizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InbandComponent {
    /// Index of the originating interferer.
    pub source: usize,
    /// Representative RF frequency (tone frequency or band center).
    pub rf_frequency_hz: f64,
    /// Power at the antenna, dBm.
    pub received_dbm: f64,
    pub attenuation_db: f64,
    /// Power after the filter, dBm.
    pub power_dbm: f64,
    pub kind: InbandKind,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BasebandInterference {
    pub components: Vec<InbandComponent>,
    /// Total post-filter fundamental power at the LNA; `None` without fundamental emitters.
    pub blocking_power_dbm: Option<f64>,
}

impl BasebandInterference {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty() && self.blocking_power_dbm.is_none()
    }

    /// Linear sum of in-band component powers, dBm.
    pub fn total_inband_dbm(&self) -> f64 {
        mw_to_dbm(self.components.iter().map(|c| dbm_to_mw(c.power_dbm)).sum())
    }
}

/// Convert interferers into baseband contributions for one trial.
pub fn inband_injection(
    intfs: &[InterfererSpec],
    filter: Option<&FilterSpec>,
    chirp: &ChirpConfig,
    rx: &ReceiverConfig,
    altitude_m: f64,
    prop: &PropagationModel,
    seed: u64,
) -> Result<BasebandInterference> {
    let mut out = BasebandInterference::default();
    let mut blocking_mw: Option<f64> = None;
    let band_loss = |band: &FrequencyBand| filter.map_or(0.0, |f| f.mean_attenuation(band));

    for (i, intf) in intfs.iter().enumerate() {
        let gain = path_gain_db(intf, altitude_m, prop)?;
        match intf.class {
            InterfererClass::Fundamental => {
                let p = intf.eirp_dbm + gain - band_loss(&intf.emission_band);
                *blocking_mw.get_or_insert(0.0) += dbm_to_mw(p);
            }
            InterfererClass::Spurious => {
                let shape = intf.spurious.as_ref().ok_or_else(|| {
                    Error::config(format!("interferers[{i}].spurious"), "required for spurious class")
                })?;
                let coherent_beat = match intf.injection {
                    InjectionMode::Spread => None,
                    InjectionMode::Coherent { false_altitude_ft } => {
                        let beat = beat_frequency_oracle(ft_to_m(false_altitude_ft), chirp)?;
                        if beat >= 0.5 * chirp.baseband_sample_rate_hz {
                            return Err(Error::config(
                                format!("interferers[{i}].injection.false_altitude_ft"),
                                "maps beyond the baseband Nyquist frequency",
                            ));
                        }
                        Some(beat)
                    }
                };
                let mut phase_rng = seed::rng(seed::derive(seed, &[i as u64]), Stream::Phase);
                match shape {
                    SpuriousShape::Tones { tones } => {
                        for (j, t) in tones.iter().enumerate() {
                            if !rx.front_end_band.contains(t.frequency_hz) {
                                return Err(Error::config(
                                    format!("interferers[{i}].spurious.tones[{j}].frequency_hz"),
                                    "tone outside the receiver front-end band",
                                ));
                            }
                            let received = t.level_dbm + gain;
                            let att = filter_attenuation(filter, t.frequency_hz)?;
                            let phase = phase_rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                            out.components.push(InbandComponent {
                                source: i,
                                rf_frequency_hz: t.frequency_hz,
                                received_dbm: received,
                                attenuation_db: att,
                                power_dbm: received - att,
                                kind: match coherent_beat {
                                    Some(beat_hz) => InbandKind::Tone { beat_hz, phase },
                                    None => InbandKind::Noise,
                                },
                            });
                        }
                    }
                    SpuriousShape::FlatNoisePsd { psd_dbm_hz } => {
                        let band = &intf.emission_band;
                        if !rx.front_end_band.contains_band(band) {
                            return Err(Error::config(
                                format!("interferers[{i}].emission_band"),
                                "spurious density support outside the receiver front-end band",
                            ));
                        }
                        let received = psd_dbm_hz + lin_to_db(band.width()) + gain;
                        let att = band_loss(band);
                        out.components.push(InbandComponent {
                            source: i,
                            rf_frequency_hz: band.center(),
                            received_dbm: received,
                            attenuation_db: att,
                            power_dbm: received - att,
                            kind: InbandKind::Noise,
                        });
                    }
                }
            }
        }
    }
    out.blocking_power_dbm = blocking_mw.map(mw_to_dbm);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prop() -> PropagationModel {
        PropagationModel::default()
    }

    fn inject(intfs: &[InterfererSpec], filter: Option<&FilterSpec>) -> BasebandInterference {
        inband_injection(
            intfs,
            filter,
            &ChirpConfig::default(),
            &ReceiverConfig::default(),
            100.0,
            &prop(),
            7,
        )
        .unwrap()
    }

    #[test]
    fn fspl_examples() {
        // closed form evaluated by hand: 4*pi*300*3.8e9/c = 47 784.9...
        let direct = 20.0 * (4.0 * std::f64::consts::PI * 300.0 * 3.8e9 / 299_792_458.0f64).log10();
        let l = fspl(300.0, 3.8e9).unwrap();
        assert_eq!(l, direct);
        assert!((l - 93.586).abs() < 1e-3, "{l}");
        let d = fspl(600.0, 3.8e9).unwrap() - l;
        assert!((d - 20.0 * 2f64.log10()).abs() < 1e-12);
        let unit = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI);
        assert!(fspl(unit, 1.0).unwrap().abs() < 1e-12);
        assert!(fspl(0.0, 1e9).is_err());
        assert!(fspl(1.0, -1e9).is_err());
    }

    #[test]
    fn received_power_examples() {
        let mut intf = InterfererSpec::us_fundamental(300.0);
        intf.eirp_dbm = 60.0;
        let p = PropagationModel {
            carrier_for_loss_hz: Some(3.8e9),
            ..prop()
        };
        let full = received_power(&intf, 100.0, &p).unwrap();
        assert!((full - (-33.586)).abs() < 1e-3, "{full}");
        intf.duty_cycle = 0.5;
        let half = received_power(&intf, 100.0, &p).unwrap();
        assert!((full - half - 10.0 * 2f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn ground_below_geometry() {
        let mut intf = InterfererSpec::us_fundamental(1.0);
        intf.geometry = Geometry::GroundBelow;
        assert!(matches!(received_power(&intf, 0.0, &prop()), Err(Error::Geometry(_))));
        let mut prev = f64::INFINITY;
        for h in [1.0, 10.0, 100.0, 762.0] {
            let p = received_power(&intf, h, &prop()).unwrap();
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn eirp_scale_for_higher_power_regions() {
        let base = InterfererSpec::us_fundamental(300.0);
        let eu = InterfererSpec {
            eirp_scale: 1.5,
            ..base.clone()
        };
        let d = received_power(&eu, 100.0, &prop()).unwrap() - received_power(&base, 100.0, &prop()).unwrap();
        assert!((d - 1.760_912_6).abs() < 1e-6);
    }

    #[test]
    fn no_interferers_gives_empty_bundle() {
        let b = inject(&[], Some(&FilterSpec::default()));
        assert!(b.is_empty());
        assert_eq!(b, BasebandInterference::default());
    }

    #[test]
    fn filter_drops_fundamental_blocking_by_stopband() {
        let mut intf = InterfererSpec::us_fundamental(300.0);
        intf.emission_band = FrequencyBand::new(3.89e9, 3.91e9).unwrap();
        let off = inject(std::slice::from_ref(&intf), None).blocking_power_dbm.unwrap();
        let on = inject(&[intf], Some(&FilterSpec::default())).blocking_power_dbm.unwrap();
        let expected = FilterSpec::default().attenuation(3.9e9).unwrap();
        assert!((off - on - expected).abs() < 1e-9);
        assert!((off - on - 40.0).abs() < 1e-9);
    }

    #[test]
    fn passband_tone_differs_by_insertion_loss() {
        let intf = InterfererSpec::spurious_tone(4.3e9, 10.0, Geometry::FixedDistance { distance_m: 300.0 });
        let f = FilterSpec::default();
        let off = inject(std::slice::from_ref(&intf), None).components[0].power_dbm;
        let on = inject(&[intf], Some(&f)).components[0].power_dbm;
        assert!((off - on - f.insertion_loss_db).abs() < 1e-12);
    }

    #[test]
    fn no_filter_matches_transparent_filter() {
        let intfs = vec![
            InterfererSpec::us_fundamental(200.0),
            InterfererSpec::spurious_tone(4.25e9, 5.0, Geometry::GroundBelow),
        ];
        assert_eq!(inject(&intfs, None), inject(&intfs, Some(&FilterSpec::transparent())));
    }

    #[test]
    fn class_separation() {
        let fundamental = inject(&[InterfererSpec::us_fundamental(200.0)], None);
        assert!(fundamental.components.is_empty());
        assert!(fundamental.blocking_power_dbm.is_some());
        let spur = inject(
            &[InterfererSpec::spurious_tone(4.3e9, 5.0, Geometry::GroundBelow)],
            None,
        );
        assert_eq!(spur.components.len(), 1);
        assert!(spur.blocking_power_dbm.is_none());
    }

    #[test]
    fn coherent_mode_places_tone_at_false_altitude() {
        let mut intf = InterfererSpec::spurious_tone(4.3e9, 5.0, Geometry::GroundBelow);
        intf.injection = InjectionMode::Coherent {
            false_altitude_ft: 500.0 / 0.3048,
        };
        let b = inject(std::slice::from_ref(&intf), None);
        let InbandKind::Tone { beat_hz, .. } = b.components[0].kind else {
            panic!("expected tone");
        };
        let oracle = beat_frequency_oracle(500.0, &ChirpConfig::default()).unwrap();
        assert!((beat_hz - oracle).abs() < 1e-6);

        intf.injection = InjectionMode::Coherent {
            false_altitude_ft: 5000.0,
        };
        assert!(inband_injection(
            &[intf],
            None,
            &ChirpConfig::default(),
            &ReceiverConfig::default(),
            100.0,
            &prop(),
            0
        )
        .is_err());
    }

    #[test]
    fn validation_rules() {
        let plan = BandPlan::default();
        let rx = ReceiverConfig::default();
        InterfererSpec::us_fundamental(300.0).validate(0, &plan, &rx).unwrap();

        let mut inband_fundamental = InterfererSpec::us_fundamental(300.0);
        inband_fundamental.emission_band = FrequencyBand::new(4.1e9, 4.25e9).unwrap();
        assert_eq!(
            inband_fundamental.validate(2, &plan, &rx).unwrap_err().field(),
            Some("interferers[2].emission_band")
        );

        let mut no_shape = InterfererSpec::spurious_tone(4.3e9, 0.0, Geometry::GroundBelow);
        no_shape.spurious = None;
        assert!(no_shape.validate(0, &plan, &rx).is_err());

        let far = InterfererSpec::spurious_tone(6.0e9, 0.0, Geometry::GroundBelow);
        assert_eq!(
            far.validate(1, &plan, &rx).unwrap_err().field(),
            Some("interferers[1].spurious.tones[0].frequency_hz")
        );
        assert!(inband_injection(&[far], None, &ChirpConfig::default(), &rx, 100.0, &prop(), 0).is_err());

        let mut bad_duty = InterfererSpec::us_fundamental(300.0);
        bad_duty.duty_cycle = 0.0;
        assert!(bad_duty.validate(0, &plan, &rx).is_err());
    }

    #[test]
    fn flat_psd_power_integrates_over_band() {
        let mut intf = InterfererSpec::spurious_tone(4.3e9, 0.0, Geometry::FixedDistance { distance_m: 100.0 });
        intf.emission_band = FrequencyBand::new(4.25e9, 4.35e9).unwrap();
        intf.spurious = Some(SpuriousShape::FlatNoisePsd { psd_dbm_hz: -60.0 });
        let b = inject(std::slice::from_ref(&intf), None);
        let expected = -60.0 + 80.0 + path_gain_db(&intf, 100.0, &prop()).unwrap();
        assert!((b.components[0].power_dbm - expected).abs() < 1e-9);
    }

    fn spurious_list() -> impl Strategy<Value = Vec<InterfererSpec>> {
        prop::collection::vec(
            (3.5e9..4.9e9f64, -20.0..40.0f64, 10.0..2000.0f64, 0.05..=1.0f64),
            1..5,
        )
        .prop_map(|v| {
            v.into_iter()
                .map(|(f, lvl, d, duty)| {
                    let mut s = InterfererSpec::spurious_tone(f, lvl, Geometry::FixedDistance { distance_m: d });
                    s.duty_cycle = duty;
                    s
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn power_accounting(intfs in spurious_list()) {
            let filter = FilterSpec::default();
            let b = inject(&intfs, Some(&filter));
            let expected_mw: f64 = intfs.iter().map(|s| {
                let SpuriousShape::Tones { tones } = s.spurious.as_ref().unwrap() else { unreachable!() };
                let t = tones[0];
                let rx_dbm = t.level_dbm + path_gain_db(s, 100.0, &prop()).unwrap();
                dbm_to_mw(rx_dbm - filter.attenuation(t.frequency_hz).unwrap())
            }).sum();
            prop_assert!((b.total_inband_dbm() - mw_to_dbm(expected_mw)).abs() < 0.01);
        }

        #[test]
        fn eirp_monotone(eirp in 20.0..70.0f64, bump in 0.0..20.0f64, level in -10.0..30.0f64, lbump in 0.0..10.0f64) {
            let mut fund = InterfererSpec::us_fundamental(250.0);
            let spur = InterfererSpec::spurious_tone(4.3e9, level, Geometry::GroundBelow);
            fund.eirp_dbm = eirp;
            let lo = inject(&[fund.clone(), spur.clone()], Some(&FilterSpec::default()));
            fund.eirp_dbm = eirp + bump;
            let spur_hi = InterfererSpec::spurious_tone(4.3e9, level + lbump, Geometry::GroundBelow);
            let hi = inject(&[fund, spur_hi], Some(&FilterSpec::default()));
            prop_assert!(hi.blocking_power_dbm.unwrap() >= lo.blocking_power_dbm.unwrap());
            for (a, b) in lo.components.iter().zip(&hi.components) {
                prop_assert!(b.power_dbm >= a.power_dbm);
            }
        }
    }
}
