//! SI constants for the order-of-magnitude calculators. Dynamics elsewhere
//! uses natural units with `ħ = k_B = 1`.


use crate::error::{Error, Result};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const K_B: f64 = 1.380_649e-23;

/// `λ_th = ħ / √(2 m k_B T)` in metres, for mass in kg and temperature in K.
pub fn thermal_de_broglie_wavelength(mass: f64, temperature: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::param("mass", "must be positive"));
    }
    if !(temperature > 0.0) {
        return Err(Error::param("temperature", "must be positive"));
    }
    Ok(HBAR / (2.0 * mass * K_B * temperature).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelength_scaling() {
        let a = thermal_de_broglie_wavelength(1e-3, 300.0).unwrap();
        let b = thermal_de_broglie_wavelength(4e-3, 300.0).unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
        assert!(thermal_de_broglie_wavelength(0.0, 1.0).is_err());
    }
}
