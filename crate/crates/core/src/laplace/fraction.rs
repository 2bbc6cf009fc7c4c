use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::model::{ModelParams, WaveParams};

/// Denominators smaller than this in magnitude are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-14;

/// Which functional equation a fraction solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// `G(p) = 1 / [p + nu/(p + mu) + sigma^2 G(p + lambda)]`
    Oscillator(ModelParams),
    /// `E(p) = 1 / [p^2 + k^2 - sigma^2 k^4 E(p + lambda)]`
    Wave(WaveParams),
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        match self {
            Model::Oscillator(p) => p.validate(),
            Model::Wave(p) => p.validate(),
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Model::Oscillator(p) => p.lambda(),
            Model::Wave(p) => p.lambda(),
        }
    }

    /// Signed coefficient multiplying the shifted tail.
    fn coupling(&self) -> f64 {
        match self {
            Model::Oscillator(p) => p.sigma_sq(),
            Model::Wave(p) => -p.coupling(),
        }
    }

    /// Bare (unperturbed) reciprocal transform at `q`; `level` is reported on poles.
    fn bare(&self, q: Complex64, level: usize) -> Result<Complex64> {
        match self {
            Model::Oscillator(p) => {
                let inner = q + p.mu_kernel;
                if inner.norm() < POLE_THRESHOLD {
                    return Err(Error::Pole { level });
                }
                Ok(q + p.nu / inner)
            }
            Model::Wave(p) => Ok(q * q + p.k * p.k),
        }
    }

    /// Scale of the unperturbed spectrum, used to size the pole search box.
    fn spectral_radius(&self) -> f64 {
        match self {
            Model::Oscillator(p) => p.omega0() + p.ou.sigma + p.mu_kernel,
            Model::Wave(p) => p.k * (1.0 + 2.0 * p.ou.sigma),
        }
    }
}

/// How the fraction is closed at the cutoff level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tail {
    /// Tail set to zero; depth 1, 2, 3 give the bare, perturbative and first
    /// non-perturbative approximants.
    #[default]
    Zero,
    /// Tail set to the fixed point of `x = 1/(a + c x)` at the cutoff level.
    FixedPoint,
}

/// A truncated continued fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproximantSpec {
    pub model: Model,
    pub depth: usize,
    pub tail: Tail,
}

impl ApproximantSpec {
    pub fn new(model: Model, depth: usize) -> Result<Self> {
        let spec = Self {
            model,
            depth,
            tail: Tail::Zero,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn oscillator(params: ModelParams, depth: usize) -> Result<Self> {
        Self::new(Model::Oscillator(params), depth)
    }

    pub fn wave(params: WaveParams, depth: usize) -> Result<Self> {
        Self::new(Model::Wave(params), depth)
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(param("depth", "must be >= 1"));
        }
        self.model.validate()
    }

    /// Same fraction one level shallower (the tail seen from level 1).
    pub fn shallower(&self) -> Option<Self> {
        (self.depth > 1).then(|| Self {
            depth: self.depth - 1,
            ..*self
        })
    }
}

fn fixed_point(a: Complex64, c: f64) -> Complex64 {
    // c x^2 + a x - 1 = 0, root that behaves like 1/a for large a
    let disc = (a * a + 4.0 * c).sqrt();
    let root = if (disc * a.conj()).re >= 0.0 { disc } else { -disc };
    2.0 / (a + root)
}

/// Evaluate the truncated fraction at `p` by backward recurrence.
pub fn dia_approximant(spec: &ApproximantSpec, p: Complex64) -> Result<Complex64> {
    let d = reciprocal(spec, p)?;
    if d.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { level: 0 });
    }
    Ok(1.0 / d)
}

/// Level-0 denominator, i.e. `1/F(p)`; zero exactly at the poles of `F`.
fn reciprocal(spec: &ApproximantSpec, p: Complex64) -> Result<Complex64> {
    let model = &spec.model;
    let lambda = model.lambda();
    let c = model.coupling();
    let mut tail = match spec.tail {
        Tail::Zero => Complex64::new(0.0, 0.0),
        Tail::FixedPoint if c == 0.0 => Complex64::new(0.0, 0.0),
        Tail::FixedPoint => {
            let q = p + lambda * spec.depth as f64;
            fixed_point(model.bare(q, spec.depth)?, c)
        }
    };
    for level in (1..spec.depth).rev() {
        let q = p + lambda * level as f64;
        let d = model.bare(q, level)? + c * tail;
        if d.norm() < POLE_THRESHOLD {
            return Err(Error::Pole { level });
        }
        tail = 1.0 / d;
    }
    Ok(model.bare(p, 0)? + c * tail)
}

/// Closed-form perturbative transform (second-order closure).
pub fn perturbative_transform(model: &Model, p: Complex64) -> Result<Complex64> {
    let d = match model {
        Model::Oscillator(m) => {
            let (nu, mu, lambda) = (m.nu, m.mu_kernel, m.lambda());
            let q = p + lambda;
            let inner = q * (q + mu) + nu;
            if (p + mu).norm() < POLE_THRESHOLD {
                return Err(Error::Pole { level: 0 });
            }
            if inner.norm() < POLE_THRESHOLD {
                return Err(Error::Pole { level: 1 });
            }
            p + nu / (p + mu) + m.sigma_sq() * (q + mu) / inner
        }
        Model::Wave(w) => {
            let k2 = w.k * w.k;
            let q = p + w.lambda();
            let inner = q * q + k2;
            if inner.norm() < POLE_THRESHOLD {
                return Err(Error::Pole { level: 1 });
            }
            p * p + k2 - w.coupling() / inner
        }
    };
    if d.norm() < POLE_THRESHOLD {
        return Err(Error::Pole { level: 0 });
    }
    Ok(1.0 / d)
}

/// Left side minus one of the functional equation, with the same truncated
/// fraction substituted at `p` and `p + lambda`.
pub fn functional_residual(spec: &ApproximantSpec, p: Complex64) -> Result<Complex64> {
    let model = &spec.model;
    let here = dia_approximant(spec, p)?;
    let shifted = dia_approximant(spec, p + model.lambda())?;
    let bare = model.bare(p, 0)?;
    Ok(bare * here + model.coupling() * shifted * here - 1.0)
}

/// Estimate of the rightmost singularity of a truncated fraction.
///
/// The reciprocal `1/F(p)` is sampled on a box covering the spectrum, every
/// local minimum of its modulus is polished with Newton's method, and the
/// largest real part among the converged zeros is returned. `None` means no
/// pole was located in the box.
pub fn abscissa_bound(spec: &ApproximantSpec) -> Option<f64> {
    const NX: usize = 120;
    const NY: usize = 480;
    let model = &spec.model;
    let radius = model.spectral_radius();
    let y_max = 1.5 * radius + 1.0;
    let x_max = 0.5 * radius + 1.0;
    let x_min = -(spec.depth as f64) * model.lambda() - 0.5 * radius - 1.0;

    let recip = |p: Complex64| reciprocal(spec, p).ok();
    let at = |i: usize, j: usize| {
        Complex64::new(
            x_min + (x_max - x_min) * i as f64 / (NX - 1) as f64,
            -y_max + 2.0 * y_max * j as f64 / (NY - 1) as f64,
        )
    };
    let mut modulus = vec![f64::INFINITY; NX * NY];
    for i in 0..NX {
        for j in 0..NY {
            if let Some(d) = recip(at(i, j)) {
                modulus[i * NY + j] = d.norm();
            }
        }
    }

    let mut best: Option<f64> = None;
    for i in 1..NX - 1 {
        for j in 1..NY - 1 {
            let m = modulus[i * NY + j];
            let is_min = (i - 1..=i + 1)
                .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                .filter(|&(a, b)| (a, b) != (i, j))
                .all(|(a, b)| modulus[a * NY + b] >= m);
            if !is_min || !m.is_finite() {
                continue;
            }
            if let Some(z) = newton_zero(&recip, at(i, j)) {
                best = Some(best.map_or(z.re, |b: f64| b.max(z.re)));
            }
        }
    }
    best
}

fn newton_zero(f: &impl Fn(Complex64) -> Option<Complex64>, start: Complex64) -> Option<Complex64> {
    let mut p = start;
    for _ in 0..60 {
        let value = f(p)?;
        let h = 1e-7 * (1.0 + p.norm());
        let slope = (f(p + h)? - f(p - h)?) / (2.0 * h);
        if slope.norm() == 0.0 {
            return None;
        }
        let step = value / slope;
        p -= step;
        if step.norm() < 1e-13 * (1.0 + p.norm()) {
            let scale = 1.0 + p.norm_sqr();
            return (f(p)?.norm() < 1e-8 * scale).then_some(p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bare_oscillator_value() {
        let params = ModelParams::new(0.04, 0.0, 0.0, 0.1).unwrap();
        for depth in [1, 2, 5, 30] {
            let spec = ApproximantSpec::oscillator(params, depth).unwrap();
            let v = dia_approximant(&spec, c(1.0, 0.0)).unwrap();
            assert!((v.re - 1.0 / 1.04).abs() < 1e-15 && v.im == 0.0);
        }
    }

    #[test]
    fn bare_wave_value() {
        let params = WaveParams::new(1.0, 0.3, 0.1).unwrap();
        let spec = ApproximantSpec::wave(params, 1).unwrap();
        assert!((dia_approximant(&spec, c(2.0, 0.0)).unwrap() - 0.2).norm() < 1e-15);
    }

    #[test]
    fn perturbative_wave_value() {
        let w = WaveParams::new(1.0, 0.1, 0.0).unwrap();
        let v = perturbative_transform(&Model::Wave(w), c(1.0, 0.0)).unwrap();
        assert!((v.re - 1.0 / (2.0 - 0.01 / 2.0)).abs() < 1e-15);
        assert!((v.re - 0.501_253_132_832_080_2).abs() < 1e-12);
    }

    #[test]
    fn perturbative_without_noise_is_bare() {
        let m = ModelParams::new(0.04, 0.0, 0.0, 0.3).unwrap();
        let p = c(0.7, -1.3);
        let v = perturbative_transform(&Model::Oscillator(m), p).unwrap();
        assert!((v - p / (p * p + 0.04)).norm() < 1e-15);
    }

    #[test]
    fn zero_depth_rejected() {
        let m = ModelParams::new(0.04, 0.0, 0.1, 0.1).unwrap();
        assert!(ApproximantSpec::oscillator(m, 0).is_err());
    }

    #[test]
    fn pole_is_reported_with_level() {
        let w = WaveParams::new(1.0, 0.0, 0.5).unwrap();
        let spec = ApproximantSpec::wave(w, 3).unwrap();
        assert!(matches!(
            dia_approximant(&spec, c(0.0, 1.0)),
            Err(Error::Pole { level: 0 })
        ));
        let m = ModelParams::new(0.04, 0.0, 0.1, 0.5).unwrap();
        let spec = ApproximantSpec::oscillator(m, 3).unwrap();
        assert!(matches!(
            dia_approximant(&spec, c(-1.0, 0.0)),
            Err(Error::Pole { level: 2 })
        ));
    }

    #[test]
    fn residual_vanishes_without_noise() {
        let w = WaveParams::new(1.5, 0.0, 0.2).unwrap();
        let spec = ApproximantSpec::wave(w, 4).unwrap();
        assert!(functional_residual(&spec, c(0.4, 2.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn deep_wave_residual_is_tiny() {
        let w = WaveParams::new(1.0, 0.1, 0.1).unwrap();
        let spec = ApproximantSpec::wave(w, 30).unwrap();
        assert!(functional_residual(&spec, c(2.0, 0.0)).unwrap().norm() <= 1e-8);
    }

    #[test]
    fn fixed_point_tail_solves_its_quadratic() {
        for (a, cc) in [(c(2.0, 1.0), 0.3), (c(-0.5, 4.0), -2.0), (c(10.0, 0.0), 1.0)] {
            let x = fixed_point(a, cc);
            assert!((x * (a + cc * x) - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn fixed_point_tail_converges_faster() {
        let w = WaveParams::new(1.0, 0.3, 0.1).unwrap();
        let p = c(0.5, 0.8);
        let reference = dia_approximant(&ApproximantSpec::wave(w, 200).unwrap(), p).unwrap();
        let plain = dia_approximant(&ApproximantSpec::wave(w, 4).unwrap(), p).unwrap();
        let closed = dia_approximant(&ApproximantSpec::wave(w, 4).unwrap().with_tail(Tail::FixedPoint), p).unwrap();
        assert!((closed - reference).norm() < (plain - reference).norm());
    }

    #[test]
    fn bound_finds_unperturbed_poles() {
        let m = ModelParams::new(0.04, 0.0, 0.0, 0.1).unwrap();
        let b = abscissa_bound(&ApproximantSpec::oscillator(m, 3).unwrap()).unwrap();
        assert!(b.abs() < 1e-8, "{b}");
    }

    #[test]
    fn bound_finds_damped_pair() {
        // depth-2 poles sit exactly on Re p = -lambda/2
        let m = ModelParams::ultra(0.04, 0.01, 0.1).unwrap();
        let b = abscissa_bound(&ApproximantSpec::oscillator(m, 2).unwrap()).unwrap();
        assert!((b + 0.05).abs() < 1e-6, "{b}");
    }
}
