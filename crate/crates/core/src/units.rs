//! Physical constants and unit conversions.

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Meters per international foot (exact).
pub const METERS_PER_FOOT: f64 = 0.3048;

pub fn ft_to_m(ft: f64) -> f64 {
    ft * METERS_PER_FOOT
}

pub fn m_to_ft(m: f64) -> f64 {
    m / METERS_PER_FOOT
}

/// dB to linear power ratio.
pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB. Zero maps to negative infinity.
pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// dBm to milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_lin(dbm)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    lin_to_db(mw)
}
