//! FMCW altimeter signal chain, simulated in dechirped (post-mixer) baseband.
//!
//! A terrain echo at height `h` shows up after dechirp as a complex tone at
//! `f_b = 2 B h / (c T)`. Band-selective effects (filter, interference) are applied to
//! component powers before synthesis, so the time series is only ever sampled at the
//! baseband rate.

use std::cell::RefCell;
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::{fspl, BasebandInterference, InbandKind};
use crate::seed::{self, Stream};
use crate::spectrum::{BandPlan, FilterSpec, FrequencyBand};
use crate::units::{dbm_to_mw, ft_to_m, lin_to_db, mw_to_dbm, SPEED_OF_LIGHT};

/// Linear FMCW sweep plus the baseband sampling used to analyse it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChirpConfig {
    pub center_frequency_hz: f64,
    pub sweep_bandwidth_hz: f64,
    pub sweep_period_s: f64,
    pub tx_power_dbm: f64,
    pub baseband_sample_rate_hz: f64,
    pub fft_length: usize,
    /// Highest altitude the unit must resolve; sets the Nyquist requirement.
    pub altitude_ceiling_ft: f64,
}

impl Default for ChirpConfig {
    fn default() -> Self {
        Self {
            center_frequency_hz: 4.3e9,
            sweep_bandwidth_hz: 150e6,
            sweep_period_s: 1e-3,
            tx_power_dbm: 20.0,
            baseband_sample_rate_hz: 2e6,
            fft_length: 4096,
            altitude_ceiling_ft: 2500.0,
        }
    }
}

impl ChirpConfig {
    /// Number of samples in one sweep.
    pub fn sweep_samples(&self) -> usize {
        (self.sweep_period_s * self.baseband_sample_rate_hz).round() as usize
    }

    /// Swept RF interval `[center - B/2, center + B/2]`.
    pub fn swept_band(&self) -> Result<FrequencyBand> {
        let half = 0.5 * self.sweep_bandwidth_hz;
        FrequencyBand::new(self.center_frequency_hz - half, self.center_frequency_hz + half)
    }

    /// FFT bin spacing in Hz.
    pub fn bin_hz(&self) -> f64 {
        self.baseband_sample_rate_hz / self.fft_length as f64
    }

    /// Beat-frequency slope `2B/(cT)` in Hz per meter.
    pub fn beat_slope(&self) -> f64 {
        2.0 * self.sweep_bandwidth_hz / (SPEED_OF_LIGHT * self.sweep_period_s)
    }

    /// Altitude spanned by one FFT bin, in meters.
    pub fn bin_altitude_m(&self) -> f64 {
        self.bin_hz() / self.beat_slope()
    }

    pub fn validate(&self, plan: &BandPlan) -> Result<()> {
        let positive = [
            ("center_frequency_hz", self.center_frequency_hz),
            ("sweep_bandwidth_hz", self.sweep_bandwidth_hz),
            ("sweep_period_s", self.sweep_period_s),
            ("baseband_sample_rate_hz", self.baseband_sample_rate_hz),
            ("altitude_ceiling_ft", self.altitude_ceiling_ft),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("chirp.{name}"), "must be finite and positive"));
            }
        }
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::config("chirp.tx_power_dbm", "must be finite"));
        }
        let swept = self
            .swept_band()
            .map_err(|e| Error::config("chirp.sweep_bandwidth_hz", e.to_string()))?;
        if !plan.ralt.contains_band(&swept) {
            return Err(Error::config(
                "chirp.center_frequency_hz",
                format!(
                    "swept band [{}, {}] Hz leaves the altimeter band [{}, {}] Hz",
                    swept.low(),
                    swept.high(),
                    plan.ralt.low(),
                    plan.ralt.high()
                ),
            ));
        }
        let max_beat = beat_frequency_oracle(ft_to_m(self.altitude_ceiling_ft), self)?;
        if self.baseband_sample_rate_hz <= 2.0 * max_beat {
            return Err(Error::config(
                "chirp.baseband_sample_rate_hz",
                format!(
                    "{} Hz does not exceed twice the {max_beat:.1} Hz beat at the altitude ceiling",
                    self.baseband_sample_rate_hz
                ),
            ));
        }
        let n = self.sweep_samples();
        if n < 3 {
            return Err(Error::config("chirp.sweep_period_s", "sweep holds fewer than 3 samples"));
        }
        if self.fft_length < n {
            return Err(Error::config(
                "chirp.fft_length",
                format!("{} is shorter than one sweep ({n} samples)", self.fft_length),
            ));
        }
        Ok(())
    }
}

/// Single specular terrain return.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoChannel {
    pub true_altitude_m: f64,
    /// Loss applied to the echo on reflection, dB. May be `inf` to suppress the echo.
    pub terrain_reflectivity_loss_db: f64,
}

impl EchoChannel {
    pub fn new(true_altitude_m: f64, terrain_reflectivity_loss_db: f64) -> Result<Self> {
        if !(true_altitude_m >= 0.0 && true_altitude_m.is_finite()) {
            return Err(Error::Domain(format!("altitude must be >= 0, got {true_altitude_m}")));
        }
        if terrain_reflectivity_loss_db.is_nan() || terrain_reflectivity_loss_db < 0.0 {
            return Err(Error::Domain(format!(
                "reflectivity loss must be >= 0, got {terrain_reflectivity_loss_db}"
            )));
        }
        Ok(Self {
            true_altitude_m,
            terrain_reflectivity_loss_db,
        })
    }

    /// Free-space loss over the `2h` round trip at `carrier_hz`, floored at 0 dB
    /// (the far-field formula goes negative below about a wavelength).
    pub fn two_way_spreading_loss_db(&self, carrier_hz: f64) -> f64 {
        if self.true_altitude_m == 0.0 {
            return 0.0;
        }
        fspl(2.0 * self.true_altitude_m, carrier_hz)
            .map(|l| l.max(0.0))
            .unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReceiverConfig {
    pub noise_figure_db: f64,
    /// Thermal noise density; `-inf` gives a noiseless receiver.
    pub thermal_noise_density_dbm_hz: f64,
    /// Out-of-band power at the LNA above which desensitization begins.
    pub blocking_threshold_dbm: f64,
    /// Noise-floor rise per dB of blocker power above the threshold.
    pub desensitization_slope: f64,
    pub detection_snr_threshold_db: f64,
    /// Gain applied after the filter to offset its insertion loss.
    pub gain_compensation_db: f64,
    /// RF range the unfiltered front end responds to.
    pub front_end_band: FrequencyBand,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self {
            noise_figure_db: 5.0,
            thermal_noise_density_dbm_hz: -174.0,
            blocking_threshold_dbm: -30.0,
            desensitization_slope: 1.0,
            detection_snr_threshold_db: 13.0,
            gain_compensation_db: 1.5,
            front_end_band: FrequencyBand::new(3.4e9, 5.0e9).expect("valid band"),
        }
    }
}

impl ReceiverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.desensitization_slope >= 0.0 && self.desensitization_slope.is_finite()) {
            return Err(Error::config("receiver.desensitization_slope", "must be >= 0"));
        }
        if !(self.detection_snr_threshold_db > 0.0 && self.detection_snr_threshold_db.is_finite()) {
            return Err(Error::config("receiver.detection_snr_threshold_db", "must be > 0"));
        }
        if !(self.noise_figure_db >= 0.0 && self.noise_figure_db.is_finite()) {
            return Err(Error::config("receiver.noise_figure_db", "must be finite and >= 0"));
        }
        if self.thermal_noise_density_dbm_hz.is_nan()
            || self.thermal_noise_density_dbm_hz == f64::INFINITY
        {
            return Err(Error::config(
                "receiver.thermal_noise_density_dbm_hz",
                "must be finite or -inf",
            ));
        }
        if !self.blocking_threshold_dbm.is_finite() {
            return Err(Error::config("receiver.blocking_threshold_dbm", "must be finite"));
        }
        if !self.gain_compensation_db.is_finite() {
            return Err(Error::config("receiver.gain_compensation_db", "must be finite"));
        }
        Ok(())
    }

    /// Per-sample complex noise power over the baseband bandwidth, before desensitization.
    pub fn noise_power_dbm(&self, chirp: &ChirpConfig) -> f64 {
        self.thermal_noise_density_dbm_hz
            + self.noise_figure_db
            + 10.0 * chirp.baseband_sample_rate_hz.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Valid,
    NoComputedData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AltimeterOutput {
    /// Present iff `validity == Valid`.
    pub altitude_estimate_m: Option<f64>,
    pub snr_db: f64,
    pub validity: Validity,
    pub peak_bin: usize,
    /// Quadratic-interpolation offset from `peak_bin`, in bins, within `[-0.5, 0.5]`.
    pub interpolated_offset: f64,
    /// Interpolated beat frequency, Hz.
    pub peak_frequency_hz: f64,
}

impl AltimeterOutput {
    pub fn is_valid(&self) -> bool {
        self.validity == Validity::Valid
    }
}

/// Closed-form beat frequency `2 B h / (c T)`.
pub fn beat_frequency_oracle(altitude_m: f64, chirp: &ChirpConfig) -> Result<f64> {
    if !(altitude_m >= 0.0) {
        return Err(Error::Domain(format!("altitude must be >= 0, got {altitude_m}")));
    }
    Ok(2.0 * chirp.sweep_bandwidth_hz * altitude_m / (SPEED_OF_LIGHT * chirp.sweep_period_s))
}

/// Range resolution `c / (2B)` in meters.
pub fn altitude_resolution(chirp: &ChirpConfig) -> Result<f64> {
    if !(chirp.sweep_bandwidth_hz > 0.0) {
        return Err(Error::Domain("sweep bandwidth must be positive".into()));
    }
    Ok(SPEED_OF_LIGHT / (2.0 * chirp.sweep_bandwidth_hz))
}

/// Noise-floor rise from out-of-band blocker power at the LNA:
/// `max(0, slope * (P - threshold))`.
pub fn blocking_degradation(blocker_power_dbm: f64, rx: &ReceiverConfig) -> f64 {
    let excess = blocker_power_dbm - rx.blocking_threshold_dbm;
    if excess > 0.0 {
        rx.desensitization_slope * excess
    } else {
        0.0
    }
}

/// Echo power at baseband after the filter and gain compensation, dBm.
///
/// Filter loss is the power-averaged attenuation across the swept band.
pub fn echo_power_dbm(
    chirp: &ChirpConfig,
    channel: &EchoChannel,
    rx: &ReceiverConfig,
    filter: Option<&FilterSpec>,
) -> Result<f64> {
    let filter_loss = match filter {
        Some(f) => f.mean_attenuation(&chirp.swept_band()?),
        None => 0.0,
    };
    Ok(chirp.tx_power_dbm
        - channel.two_way_spreading_loss_db(chirp.center_frequency_hz)
        - channel.terrain_reflectivity_loss_db
        - filter_loss
        + rx.gain_compensation_db)
}

/// Effective per-sample noise power: thermal floor raised by desensitization.
pub fn effective_noise_dbm(
    chirp: &ChirpConfig,
    rx: &ReceiverConfig,
    injected: &BasebandInterference,
) -> f64 {
    let rise = injected
        .blocking_power_dbm
        .map(|p| blocking_degradation(p, rx))
        .unwrap_or(0.0);
    rx.noise_power_dbm(chirp) + rise
}

fn amplitude(power_dbm: f64) -> f64 {
    dbm_to_mw(power_dbm).sqrt()
}

/// Synthesize one dechirped sweep, zero-padded to `fft_length`.
///
/// Contents: the echo tone, coherent interference tones, and white complex Gaussian noise
/// whose variance is the effective noise floor plus any noise-like interference. Echo and
/// interference receive the receiver's gain compensation; thermal noise does not.
///
/// Noise draws come from a stream independent of everything else, so two scenarios that
/// differ only in component powers see the same normalized noise realization.
pub fn synthesize_dechirped(
    chirp: &ChirpConfig,
    channel: &EchoChannel,
    rx: &ReceiverConfig,
    filter: Option<&FilterSpec>,
    injected: &BasebandInterference,
    seed: u64,
) -> Result<Vec<Complex64>> {
    let fs = chirp.baseband_sample_rate_hz;
    let beat = beat_frequency_oracle(channel.true_altitude_m, chirp)?;
    if fs <= 2.0 * beat {
        return Err(Error::config(
            "chirp.baseband_sample_rate_hz",
            format!("{fs} Hz violates Nyquist for a {beat:.1} Hz beat"),
        ));
    }
    let sweep = chirp.sweep_samples();
    if chirp.fft_length < sweep {
        return Err(Error::config("chirp.fft_length", "shorter than one sweep"));
    }

    let mut phase_rng = seed::rng(seed, Stream::Phase);
    let echo_phase = phase_rng.random::<f64>() * 2.0 * PI;

    let mut tones = vec![(beat, amplitude(echo_power_dbm(chirp, channel, rx, filter)?), echo_phase)];
    let mut noise_mw = dbm_to_mw(effective_noise_dbm(chirp, rx, injected));
    for c in &injected.components {
        let p = c.power_dbm + rx.gain_compensation_db;
        match c.kind {
            InbandKind::Tone { beat_hz, phase } => tones.push((beat_hz, amplitude(p), phase)),
            InbandKind::Noise => noise_mw += dbm_to_mw(p),
        }
    }
    let sigma = (0.5 * noise_mw).sqrt();

    let mut noise_rng = seed::rng(seed, Stream::Noise);
    let mut out = vec![Complex64::new(0.0, 0.0); chirp.fft_length];
    for (n, slot) in out.iter_mut().take(sweep).enumerate() {
        let t = n as f64 / fs;
        let mut s = Complex64::new(0.0, 0.0);
        for &(f, a, phi) in &tones {
            if a > 0.0 {
                s += Complex64::from_polar(a, 2.0 * PI * f * t + phi);
            }
        }
        let re: f64 = noise_rng.sample(StandardNormal);
        let im: f64 = noise_rng.sample(StandardNormal);
        *slot = s + Complex64::new(re, im) * sigma;
    }
    Ok(out)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_fft(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

fn hann(n: usize, len: usize) -> f64 {
    0.5 - 0.5 * (2.0 * PI * n as f64 / (len - 1) as f64).cos()
}

/// Hann-windowed power spectrum `|X[k]|^2` of a padded sweep.
pub fn power_spectrum(samples: &[Complex64], sweep_len: usize) -> Vec<f64> {
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(n, &x)| if n < sweep_len { x * hann(n, sweep_len) } else { Complex64::new(0.0, 0.0) })
        .collect();
    forward_fft(buf.len()).process(&mut buf);
    buf.iter().map(|x| x.norm_sqr()).collect()
}

/// Mean noise power per bin estimated from the spectrum median.
///
/// Bin powers of complex Gaussian noise are exponentially distributed, whose median is
/// `ln 2` times the mean.
pub fn noise_floor(power: &[f64]) -> f64 {
    let mut sorted = power.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    median / LN_2
}

/// Three-point quadratic fit in log-power around `k`, offset in bins clamped to +-0.5.
fn interpolate_peak(power: &[f64], k: usize) -> f64 {
    let n = power.len();
    let ln = |p: f64| p.max(f64::MIN_POSITIVE).ln();
    let a = ln(power[(k + n - 1) % n]);
    let b = ln(power[k]);
    let c = ln(power[(k + 1) % n]);
    let denom = a - 2.0 * b + c;
    if denom >= 0.0 || !denom.is_finite() {
        return 0.0;
    }
    (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
}

/// Spectral altitude estimate from one padded sweep.
///
/// Picks the strongest bin in `[0, N/2)`; on exact ties the lower frequency (lower altitude)
/// wins. SNR is peak bin power over the median-based noise floor.
pub fn estimate_altitude(
    samples: &[Complex64],
    chirp: &ChirpConfig,
    rx: &ReceiverConfig,
) -> Result<AltimeterOutput> {
    if samples.len() != chirp.fft_length {
        return Err(Error::Contract(format!(
            "expected {} samples, got {}",
            chirp.fft_length,
            samples.len()
        )));
    }
    let power = power_spectrum(samples, chirp.sweep_samples().min(samples.len()));
    let floor = noise_floor(&power);

    let half = power.len() / 2;
    let mut peak_bin = 0;
    for k in 1..half {
        if power[k] > power[peak_bin] {
            peak_bin = k;
        }
    }
    let offset = interpolate_peak(&power, peak_bin);
    let peak_frequency_hz = (peak_bin as f64 + offset) * chirp.bin_hz();

    const TINY: f64 = 1e-300;
    let snr_db = lin_to_db(power[peak_bin].max(TINY) / floor.max(TINY));
    let valid = snr_db >= rx.detection_snr_threshold_db;
    let altitude = (peak_frequency_hz / chirp.beat_slope()).max(0.0);

    Ok(AltimeterOutput {
        altitude_estimate_m: valid.then_some(altitude),
        snr_db,
        validity: if valid { Validity::Valid } else { Validity::NoComputedData },
        peak_bin,
        interpolated_offset: offset,
        peak_frequency_hz,
    })
}

/// Received echo power before the filter, dBm. Used to size test interferers.
pub fn echo_power_at_antenna_dbm(chirp: &ChirpConfig, channel: &EchoChannel) -> f64 {
    chirp.tx_power_dbm
        - channel.two_way_spreading_loss_db(chirp.center_frequency_hz)
        - channel.terrain_reflectivity_loss_db
}

/// Power of a sample sequence, dBm (mean `|x|^2`).
pub fn mean_power_dbm(samples: &[Complex64]) -> f64 {
    mw_to_dbm(samples.iter().map(|x| x.norm_sqr()).sum::<f64>() / samples.len() as f64)
}
