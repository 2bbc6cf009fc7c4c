use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, param, Result};
use crate::ou::OUParams;

/// Parameters of the oscillator with exponential memory kernel
/// `Gamma(t) = nu exp(-mu_kernel t)` and OU frequency noise `b(t)`.
///
/// `mu_kernel = 0` is the infinite-memory case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub nu: f64,
    #[serde(default)]
    pub mu_kernel: f64,
    pub ou: OUParams,
}

impl ModelParams {
    pub fn new(nu: f64, mu_kernel: f64, sigma: f64, lambda: f64) -> Result<Self> {
        let p = Self {
            nu,
            mu_kernel,
            ou: OUParams { sigma, lambda },
        };
        p.validate()?;
        Ok(p)
    }

    /// Infinite-memory model from `nu`, `sigma^2` and `lambda`.
    pub fn ultra(nu: f64, sigma_sq: f64, lambda: f64) -> Result<Self> {
        Self::new(nu, 0.0, sigma_sq.max(0.0).sqrt(), lambda)
    }

    /// Checks everything except `lambda > 0`, which only sampling needs.
    pub fn validate(&self) -> Result<()> {
        ensure_finite("nu", self.nu)?;
        ensure_finite("mu_kernel", self.mu_kernel)?;
        if self.nu <= 0.0 {
            return Err(param("nu", format!("must be > 0, got {}", self.nu)));
        }
        if self.mu_kernel < 0.0 {
            return Err(param("mu_kernel", format!("must be >= 0, got {}", self.mu_kernel)));
        }
        validate_ou_relaxed(&self.ou)
    }

    pub fn sigma_sq(&self) -> f64 {
        self.ou.variance()
    }

    pub fn lambda(&self) -> f64 {
        self.ou.lambda
    }

    /// Unperturbed angular frequency `sqrt(nu)`.
    pub fn omega0(&self) -> f64 {
        self.nu.sqrt()
    }
}

/// Parameters of the 1-D Helmholtz problem with OU refractive-index fluctuations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub k: f64,
    pub ou: OUParams,
}

impl WaveParams {
    pub fn new(k: f64, sigma: f64, lambda: f64) -> Result<Self> {
        let p = Self {
            k,
            ou: OUParams { sigma, lambda },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("k", self.k)?;
        if self.k <= 0.0 {
            return Err(param("k", format!("must be > 0, got {}", self.k)));
        }
        validate_ou_relaxed(&self.ou)
    }

    pub fn sigma_sq(&self) -> f64 {
        self.ou.variance()
    }

    pub fn lambda(&self) -> f64 {
        self.ou.lambda
    }

    /// Coupling `sigma^2 k^4` of the closure convolution.
    pub fn coupling(&self) -> f64 {
        self.sigma_sq() * self.k.powi(4)
    }
}

fn validate_ou_relaxed(ou: &OUParams) -> Result<()> {
    ensure_finite("sigma", ou.sigma)?;
    ensure_finite("lambda", ou.lambda)?;
    if ou.sigma < 0.0 {
        return Err(param("sigma", format!("must be >= 0, got {}", ou.sigma)));
    }
    if ou.lambda < 0.0 {
        return Err(param("lambda", format!("must be >= 0, got {}", ou.lambda)));
    }
    Ok(())
}
