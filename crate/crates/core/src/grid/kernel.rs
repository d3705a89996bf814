use crate::error::{Error, Result};

/// Square convolution support of side `2 * radius + 1`.
///
/// Offsets are `(u, v)` with `u` along columns and `v` along rows (down),
/// both in `-radius..=radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    radius: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(radius: usize, weights: Vec<f64>) -> Result<Self> {
        let side = 2 * radius + 1;
        if weights.len() != side * side {
            return Err(Error::invalid_input(format!(
                "kernel of radius {radius} needs {} weights, got {}",
                side * side,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid_input("kernel weights must be finite"));
        }
        Ok(Kernel { radius, weights })
    }

    pub fn from_fn(radius: usize, mut f: impl FnMut(isize, isize) -> f64) -> Result<Self> {
        let r = radius as isize;
        let mut weights = Vec::with_capacity((2 * radius + 1).pow(2));
        for v in -r..=r {
            for u in -r..=r {
                weights.push(f(u, v));
            }
        }
        Kernel::new(radius, weights)
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.radius
    }

    #[inline]
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    #[inline]
    pub fn weight(&self, u: isize, v: isize) -> f64 {
        let r = self.radius as isize;
        self.weights[((v + r) as usize) * self.side() + (u + r) as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Point reflection through the kernel center.
    pub fn rotate_180(&self) -> Kernel {
        let mut weights = self.weights.clone();
        weights.reverse();
        Kernel {
            radius: self.radius,
            weights,
        }
    }

    /// Iterates `(u, v, weight)` over the support, row by row.
    pub fn taps(&self) -> impl Iterator<Item = (isize, isize, f64)> + '_ {
        let r = self.radius as isize;
        let side = self.side();
        self.weights.iter().enumerate().map(move |(i, &w)| {
            let u = (i % side) as isize - r;
            let v = (i / side) as isize - r;
            (u, v, w)
        })
    }
}

/// Normalized isotropic Gaussian `exp(-(u²+v²)/(2σ²))` on a square support.
pub fn gaussian_kernel(sigma: f64, radius: usize) -> Result<Kernel> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid_param(format!(
            "gaussian sigma must be positive and finite, got {sigma}"
        )));
    }
    if radius < 1 {
        return Err(Error::invalid_param("kernel radius must be at least 1"));
    }
    let denom = 2.0 * sigma * sigma;
    let raw = Kernel::from_fn(radius, |u, v| (-((u * u + v * v) as f64) / denom).exp())?;
    let total = raw.sum();
    Ok(Kernel {
        radius,
        weights: raw.weights.into_iter().map(|w| w / total).collect(),
    })
}

/// Integer inhibition delay (in frames) for every tap of a kernel support.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayMap {
    radius: usize,
    delays: Vec<usize>,
    max_delay: usize,
}

impl DelayMap {
    #[inline]
    pub fn radius(&self) -> usize {
        self.radius
    }

    #[inline]
    pub fn delay(&self, u: isize, v: isize) -> usize {
        let r = self.radius as isize;
        let side = 2 * self.radius + 1;
        self.delays[((v + r) as usize) * side + (u + r) as usize]
    }

    /// Row-major delays, laid out like [`Kernel::weights`].
    pub fn delays(&self) -> &[usize] {
        &self.delays
    }

    pub fn max_delay(&self) -> usize {
        self.max_delay
    }

    /// A map with the same delay on every tap.
    pub fn uniform(radius: usize, delay: usize) -> DelayMap {
        DelayMap {
            radius,
            delays: vec![delay; (2 * radius + 1).pow(2)],
            max_delay: delay,
        }
    }
}

/// Radially increasing latency `α + 1/(β + exp(-λ²(u²+v²)))`, rounded to the
/// nearest frame with ties to even.
pub fn delay_map(alpha: f64, beta: f64, lambda: f64, radius: usize) -> Result<DelayMap> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid_param(format!(
            "delay beta must be positive, got {beta}"
        )));
    }
    if !alpha.is_finite() || !lambda.is_finite() {
        return Err(Error::invalid_param(
            "delay alpha and lambda must be finite",
        ));
    }
    if radius < 1 {
        return Err(Error::invalid_param("kernel radius must be at least 1"));
    }
    let r = radius as isize;
    let lambda_sq = lambda * lambda;
    let mut delays = Vec::with_capacity((2 * radius + 1).pow(2));
    for v in -r..=r {
        for u in -r..=r {
            let dist_sq = (u * u + v * v) as f64;
            let tau = (alpha + 1.0 / (beta + (-lambda_sq * dist_sq).exp())).round_ties_even();
            if tau < 0.0 {
                return Err(Error::invalid_param(format!(
                    "delay parameters give a negative delay {tau} at offset ({u}, {v})"
                )));
            }
            delays.push(tau as usize);
        }
    }
    let max_delay = delays.iter().copied().max().unwrap_or(0);
    Ok(DelayMap {
        radius,
        delays,
        max_delay,
    })
}
