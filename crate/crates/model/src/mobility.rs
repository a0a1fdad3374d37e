use crate::error::ModelError;
use crate::kmh_to_km_per_s;

/// User mobility and handover-delay parameters.
///
/// `macro_delay_s` (`d_m`) is the connection interruption per handover whose
/// target is a macro-to-macro transition; `femto_delay_s` (`d_f`) applies to
/// every handover involving a femto. Femto handovers are at least as costly
/// (`0 <= d_m <= d_f`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityProfile {
    /// User velocity in km/h.
    pub velocity_kmh: f64,
    /// Macro-to-macro handover delay in seconds.
    pub macro_delay_s: f64,
    /// Femto-involved handover delay in seconds.
    pub femto_delay_s: f64,
}

impl MobilityProfile {
    pub const fn new(velocity_kmh: f64, macro_delay_s: f64, femto_delay_s: f64) -> Self {
        Self {
            velocity_kmh,
            macro_delay_s,
            femto_delay_s,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.velocity_kmh >= 0.0) || !self.velocity_kmh.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "velocity",
                value: self.velocity_kmh,
                constraint: "must be finite and >= 0",
            });
        }
        if !(self.macro_delay_s >= 0.0) || !self.macro_delay_s.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "macro handover delay",
                value: self.macro_delay_s,
                constraint: "must be finite and >= 0",
            });
        }
        if !(self.femto_delay_s >= self.macro_delay_s) || !self.femto_delay_s.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "femto handover delay",
                value: self.femto_delay_s,
                constraint: "must be finite and >= macro handover delay",
            });
        }
        Ok(())
    }

    /// Velocity in km/s (the unit used by every internal rate formula).
    pub fn velocity_km_per_s(&self) -> f64 {
        kmh_to_km_per_s(self.velocity_kmh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocity_conversion() {
        let m = MobilityProfile::new(100.0, 0.35, 0.7);
        assert!((m.velocity_km_per_s() - 0.027_777_777_777_777_776).abs() < 1e-18);
    }

    #[test]
    fn delay_ordering_enforced() {
        assert!(MobilityProfile::new(50.0, 0.7, 0.35).validate().is_err());
        assert!(MobilityProfile::new(50.0, 0.35, 0.35).validate().is_ok());
        assert!(MobilityProfile::new(-1.0, 0.35, 0.7).validate().is_err());
    }
}
