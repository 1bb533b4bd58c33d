//! Atomic-unit conversions used at the I/O boundary.
//!
//! Everything inside the crate is expressed in hartree atomic units. Values
//! given in eV, fs or V/m are converted once, on the way in or out.

use std::fmt;

/// Electron-volts per hartree (CODATA).
pub const EV_PER_HARTREE: f64 = 27.211386;
/// Femtoseconds per atomic unit of time.
pub const FS_PER_AU_TIME: f64 = 0.02418884;
/// Volts per metre per atomic unit of electric field.
pub const V_PER_M_PER_AU_FIELD: f64 = 5.14221e11;
/// Milli-electron-volts per hartree.
pub const MEV_PER_HARTREE: f64 = EV_PER_HARTREE * 1.0e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    ElectronVolt,
    MilliElectronVolt,
    Hartree,
    Femtosecond,
    AuTime,
    AuField,
    VoltPerMetre,
    PerFemtosecond,
    AuFrequency,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::ElectronVolt => "eV",
            Unit::MilliElectronVolt => "meV",
            Unit::Hartree => "hartree",
            Unit::Femtosecond => "fs",
            Unit::AuTime => "a.u. time",
            Unit::AuField => "a.u. field",
            Unit::VoltPerMetre => "V/m",
            Unit::PerFemtosecond => "1/fs",
            Unit::AuFrequency => "a.u. frequency",
        };
        f.write_str(s)
    }
}

/// Converts `value` between the supported unit pairs.
///
/// Supported: eV<->hartree, fs<->a.u. time, a.u. field<->V/m,
/// hartree<->meV and 1/fs<->a.u. frequency.
pub fn convert_unit(value: f64, from: Unit, to: Unit) -> crate::Result<f64> {
    use Unit::*;
    let v = match (from, to) {
        (ElectronVolt, Hartree) => value / EV_PER_HARTREE,
        (Hartree, ElectronVolt) => value * EV_PER_HARTREE,
        (Femtosecond, AuTime) => value / FS_PER_AU_TIME,
        (AuTime, Femtosecond) => value * FS_PER_AU_TIME,
        (AuField, VoltPerMetre) => value * V_PER_M_PER_AU_FIELD,
        (VoltPerMetre, AuField) => value / V_PER_M_PER_AU_FIELD,
        (Hartree, MilliElectronVolt) => value * MEV_PER_HARTREE,
        (MilliElectronVolt, Hartree) => value / MEV_PER_HARTREE,
        (PerFemtosecond, AuFrequency) => value * FS_PER_AU_TIME,
        (AuFrequency, PerFemtosecond) => value / FS_PER_AU_TIME,
        _ => return Err(crate::Error::UnsupportedConversion { from, to }),
    };
    Ok(v)
}

// Infallible shorthands for the fixed pairs used throughout the crate.

#[inline]
pub fn fs_to_au(t_fs: f64) -> f64 {
    t_fs / FS_PER_AU_TIME
}

#[inline]
pub fn au_to_fs(t_au: f64) -> f64 {
    t_au * FS_PER_AU_TIME
}

#[inline]
pub fn ev_to_hartree(e_ev: f64) -> f64 {
    e_ev / EV_PER_HARTREE
}

#[inline]
pub fn hartree_to_mev(e: f64) -> f64 {
    e * MEV_PER_HARTREE
}

#[inline]
pub fn per_fs_to_au(rate: f64) -> f64 {
    rate * FS_PER_AU_TIME
}

#[inline]
pub fn field_au_to_v_per_m(f: f64) -> f64 {
    f * V_PER_M_PER_AU_FIELD
}
