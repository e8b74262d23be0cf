//! Frequency-band algebra and the receiver bandpass filter mask.
//!
//! The filter is a frequency-domain power mask: attenuation in positive dB, to be subtracted
//! from signal power. No time-domain realization is modeled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{db_to_lin, lin_to_db};

/// A closed frequency interval `[low, high]` in Hz with `0 < low < high`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct FrequencyBand {
    low: f64,
    high: f64,
}

impl FrequencyBand {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite()) {
            return Err(Error::Domain(format!("band edges must be finite: [{low}, {high}]")));
        }
        if low <= 0.0 {
            return Err(Error::Domain(format!("band low edge must be positive, got {low}")));
        }
        if low >= high {
            return Err(Error::Domain(format!("band requires low < high, got [{low}, {high}]")));
        }
        Ok(Self { low, high })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.low + self.high)
    }

    pub fn contains(&self, f: f64) -> bool {
        f >= self.low && f <= self.high
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains_band(&self, other: &FrequencyBand) -> bool {
        other.low >= self.low && other.high <= self.high
    }

    pub fn is_disjoint(&self, other: &FrequencyBand) -> bool {
        band_overlap(self, other).is_none()
    }
}

impl TryFrom<[f64; 2]> for FrequencyBand {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        FrequencyBand::new(v[0], v[1])
    }
}

impl From<FrequencyBand> for [f64; 2] {
    fn from(b: FrequencyBand) -> Self {
        [b.low, b.high]
    }
}

/// Spectral margin between a victim band and an interferer band, in Hz.
///
/// Positive when the bands are disjoint (the gap between the nearest edges), negative when
/// they overlap (minus the overlap width), zero when they touch.
pub fn guard_band(victim: &FrequencyBand, interferer: &FrequencyBand) -> f64 {
    if interferer.high <= victim.low {
        victim.low - interferer.high
    } else if interferer.low >= victim.high {
        interferer.low - victim.high
    } else {
        -(victim.high.min(interferer.high) - victim.low.max(interferer.low))
    }
}

/// Intersection of two bands, `None` when empty (touching edges count as empty).
pub fn band_overlap(a: &FrequencyBand, b: &FrequencyBand) -> Option<FrequencyBand> {
    let low = a.low.max(b.low);
    let high = a.high.min(b.high);
    (low < high).then_some(FrequencyBand { low, high })
}

/// Named registry of the bands the simulator reasons about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandPlan {
    /// Radar altimeter allocation.
    pub ralt: FrequencyBand,
    /// US 5G C-band allocation.
    pub us_5g: FrequencyBand,
    /// European 5G allocation.
    pub eu_5g: FrequencyBand,
    /// Default passband of the receiver filter.
    pub filter_passband: FrequencyBand,
}

impl Default for BandPlan {
    fn default() -> Self {
        Self {
            ralt: FrequencyBand { low: 4.2e9, high: 4.4e9 },
            us_5g: FrequencyBand { low: 3.7e9, high: 3.98e9 },
            eu_5g: FrequencyBand { low: 3.4e9, high: 3.8e9 },
            filter_passband: FrequencyBand { low: 4.0e9, high: 4.6e9 },
        }
    }
}

/// Shape of the filter skirt between a stopband edge and the adjacent passband edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum TransitionShape {
    /// Attenuation in dB linear in frequency.
    LinearDb,
    /// Attenuation in dB rises as `t^order`, `t` the normalized distance from the passband
    /// edge (0) to the stopband edge (1).
    PolynomialDb { order: u32 },
}

/// Parametric bandpass response: two stopbands around a passband.
///
/// The shipped defaults (40 dB stopband, 0.5 dB ripple, 1.5 dB insertion loss) are
/// placeholders, not vendor data. Only the 4.0-4.6 GHz passband has a documented source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSpec {
    pub passband: FrequencyBand,
    pub lower_stopband_edge_hz: f64,
    pub upper_stopband_edge_hz: f64,
    /// Minimum attenuation at and beyond the stopband edges.
    pub stopband_attenuation_db: f64,
    /// Peak-to-peak passband ripple above the insertion loss.
    pub passband_ripple_db: f64,
    /// Number of full ripple periods across the passband; 0 gives a flat passband.
    pub ripple_periods: u32,
    pub insertion_loss_db: f64,
    pub transition: TransitionShape,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self {
            passband: BandPlan::default().filter_passband,
            lower_stopband_edge_hz: 3.98e9,
            upper_stopband_edge_hz: 4.8e9,
            stopband_attenuation_db: 40.0,
            passband_ripple_db: 0.5,
            ripple_periods: 4,
            insertion_loss_db: 1.5,
            transition: TransitionShape::LinearDb,
        }
    }
}

impl FilterSpec {
    /// A filter that passes everything unattenuated.
    pub fn transparent() -> Self {
        Self {
            stopband_attenuation_db: 0.0,
            passband_ripple_db: 0.0,
            insertion_loss_db: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = |name: &str| format!("filter.{name}");
        let finite = [
            ("lower_stopband_edge_hz", self.lower_stopband_edge_hz),
            ("upper_stopband_edge_hz", self.upper_stopband_edge_hz),
            ("stopband_attenuation_db", self.stopband_attenuation_db),
            ("passband_ripple_db", self.passband_ripple_db),
            ("insertion_loss_db", self.insertion_loss_db),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::config(f(name), "must be finite"));
            }
        }
        if !(self.lower_stopband_edge_hz > 0.0 && self.lower_stopband_edge_hz < self.passband.low) {
            return Err(Error::config(
                f("lower_stopband_edge_hz"),
                "must be positive and below the passband low edge",
            ));
        }
        if self.upper_stopband_edge_hz <= self.passband.high {
            return Err(Error::config(
                f("upper_stopband_edge_hz"),
                "must be above the passband high edge",
            ));
        }
        if self.insertion_loss_db < 0.0 {
            return Err(Error::config(f("insertion_loss_db"), "must be >= 0"));
        }
        if self.passband_ripple_db < 0.0 {
            return Err(Error::config(f("passband_ripple_db"), "must be >= 0"));
        }
        if self.stopband_attenuation_db < self.insertion_loss_db {
            return Err(Error::config(
                f("stopband_attenuation_db"),
                "must be >= 0 and not below the insertion loss",
            ));
        }
        if let TransitionShape::PolynomialDb { order } = self.transition {
            if order == 0 {
                return Err(Error::config(f("transition.order"), "must be >= 1"));
            }
        }
        Ok(())
    }

    fn skirt(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let shaped = match self.transition {
            TransitionShape::LinearDb => t,
            TransitionShape::PolynomialDb { order } => t.powi(order as i32),
        };
        self.insertion_loss_db + (self.stopband_attenuation_db - self.insertion_loss_db) * shaped
    }

    /// Attenuation in dB at `f` Hz. Non-negative; subtract it from signal power.
    pub fn attenuation(&self, f: f64) -> Result<f64> {
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::Domain(format!("frequency must be positive, got {f}")));
        }
        let pb = &self.passband;
        let a = if f <= self.lower_stopband_edge_hz || f >= self.upper_stopband_edge_hz {
            self.stopband_attenuation_db
        } else if f < pb.low {
            self.skirt((pb.low - f) / (pb.low - self.lower_stopband_edge_hz))
        } else if f > pb.high {
            self.skirt((f - pb.high) / (self.upper_stopband_edge_hz - pb.high))
        } else {
            let x = (f - pb.low) / pb.width();
            let s = (std::f64::consts::PI * f64::from(self.ripple_periods) * x).sin();
            self.insertion_loss_db + self.passband_ripple_db * s * s
        };
        Ok(a)
    }

    /// Power-averaged attenuation over a band, in dB.
    ///
    /// Averages the linear power gain with a 512-point midpoint rule, which is exact for
    /// regions where the mask is constant.
    pub fn mean_attenuation(&self, band: &FrequencyBand) -> f64 {
        const POINTS: usize = 512;
        let step = band.width() / POINTS as f64;
        let gain: f64 = (0..POINTS)
            .map(|i| {
                let f = band.low + (i as f64 + 0.5) * step;
                // band edges are positive, so attenuation cannot fail here
                db_to_lin(-self.attenuation(f).expect("positive frequency"))
            })
            .sum::<f64>()
            / POINTS as f64;
        -lin_to_db(gain)
    }
}

/// Attenuation of an optional filter; an absent filter attenuates nothing.
pub fn filter_attenuation(filter: Option<&FilterSpec>, f: f64) -> Result<f64> {
    match filter {
        Some(spec) => spec.attenuation(f),
        None if f > 0.0 && f.is_finite() => Ok(0.0),
        None => Err(Error::Domain(format!("frequency must be positive, got {f}"))),
    }
}
