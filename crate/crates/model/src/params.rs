use crate::error::ModelError;

/// One tier of base stations: a homogeneous Poisson field with a common
/// transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierParams {
    /// Base station density in stations per km².
    pub density_per_km2: f64,
    /// Transmit power in watts.
    pub power_watt: f64,
}

impl TierParams {
    pub const fn new(density_per_km2: f64, power_watt: f64) -> Self {
        Self {
            density_per_km2,
            power_watt,
        }
    }

    fn validate(&self, tier: &'static str) -> Result<(), ModelError> {
        if !(self.density_per_km2 >= 0.0) || !self.density_per_km2.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: if tier == "macro" {
                    "macro density"
                } else {
                    "femto density"
                },
                value: self.density_per_km2,
                constraint: "must be finite and >= 0",
            });
        }
        if !(self.power_watt > 0.0) || !self.power_watt.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: if tier == "macro" {
                    "macro power"
                } else {
                    "femto power"
                },
                value: self.power_watt,
                constraint: "must be finite and > 0",
            });
        }
        Ok(())
    }
}

/// Full parameter set for the two-tier downlink network.
///
/// Users associate with the base station of maximum mean received power
/// `P_k d^-eta` (Rayleigh fading averages out of the association decision).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// Macro tier (sparser, higher power).
    pub macro_tier: TierParams,
    /// Femto tier (denser, lower power).
    pub femto_tier: TierParams,
    /// Path-loss exponent, strictly greater than 2.
    pub path_loss_exponent: f64,
    /// Receiver noise power in watts; 0 models the interference-limited regime.
    pub noise_power_watt: f64,
}

impl NetworkParams {
    /// Interference-limited network (zero noise).
    pub const fn new(macro_tier: TierParams, femto_tier: TierParams, path_loss_exponent: f64) -> Self {
        Self {
            macro_tier,
            femto_tier,
            path_loss_exponent,
            noise_power_watt: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.macro_tier.validate("macro")?;
        self.femto_tier.validate("femto")?;
        if !(self.path_loss_exponent > 2.0) || !self.path_loss_exponent.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "path-loss exponent",
                value: self.path_loss_exponent,
                constraint: "must be finite and > 2",
            });
        }
        if !(self.noise_power_watt >= 0.0) || !self.noise_power_watt.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "noise power",
                value: self.noise_power_watt,
                constraint: "must be finite and >= 0",
            });
        }
        Ok(())
    }

    /// Power ratio `(P_f / P_m)^(2/eta)` that converts femto density into
    /// macro-equivalent density under max mean-power association.
    pub fn femto_weight(&self) -> f64 {
        (self.femto_tier.power_watt / self.macro_tier.power_watt)
            .powf(2.0 / self.path_loss_exponent)
    }

    /// Intensity of the distance-mapped one-dimensional field,
    /// `lambda_t = lambda_m P_m^(2/eta) + lambda_f P_f^(2/eta)`.
    ///
    /// Mapping every station at distance `d` with power `P` to `y = d^eta / P`
    /// turns the two-tier planar field into one non-homogeneous Poisson
    /// process on the half line with mean measure `pi lambda_t y^(2/eta)`.
    pub fn mapped_intensity(&self) -> f64 {
        let e = 2.0 / self.path_loss_exponent;
        self.macro_tier.density_per_km2 * self.macro_tier.power_watt.powf(e)
            + self.femto_tier.density_per_km2 * self.femto_tier.power_watt.powf(e)
    }

    /// Macro-equivalent total density `lambda_m + lambda_f (P_f/P_m)^(2/eta)`.
    ///
    /// This is the apparent density of the combined field seen through the
    /// macro tier's power normalisation; the serving-distance distribution of
    /// a macro-associated user is Rayleigh with this density.
    pub fn equivalent_density_macro(&self) -> f64 {
        self.macro_tier.density_per_km2 + self.femto_tier.density_per_km2 * self.femto_weight()
    }

    /// Femto-equivalent total density `lambda_f + lambda_m (P_m/P_f)^(2/eta)`.
    pub fn equivalent_density_femto(&self) -> f64 {
        self.femto_tier.density_per_km2 + self.macro_tier.density_per_km2 / self.femto_weight()
    }

    /// Probability that the strongest station (by mean received power)
    /// belongs to the macro tier.
    ///
    /// Errors if both tiers have zero density.
    pub fn association_probability(&self) -> Result<f64, ModelError> {
        self.validate()?;
        let lm = self.macro_tier.density_per_km2;
        let lf_eq = self.femto_tier.density_per_km2 * self.femto_weight();
        let total = lm + lf_eq;
        if total == 0.0 {
            return Err(ModelError::Undefined(
                "association probability requires at least one tier with positive density",
            ));
        }
        Ok(lm / total)
    }
}
