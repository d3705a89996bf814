use std::f64::consts::FRAC_1_SQRT_2;

use super::params::{DpcParams, MdeParams};
use crate::error::Result;
use crate::grid::{gaussian_kernel, Kernel};

/// Rotated sigmoid `1/(1+exp(−(x'+y')))`, `(x', y')` being `(x, y)` rotated
/// counterclockwise by `theta`.
pub fn mde_weight(x: f64, y: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let xr = x * c - y * s;
    let yr = x * s + y * c;
    1.0 / (1.0 + (-(xr + yr)).exp())
}

/// Direction-weighted inhibition kernels, one per entry of `mde.directions()`.
///
/// Each is the normalized inhibition Gaussian times the MDE weight. Kernel
/// offsets are (column, row-down); they are turned by 5π/4 before the
/// weight is evaluated so that the inhibitory lobe of channel θ trails
/// behind direction θ (math convention, y up), i.e. channel θ passes motion
/// along θ and suppresses motion along θ + π.
pub fn build_direction_kernels(params: &DpcParams, mde: &MdeParams) -> Result<Vec<Kernel>> {
    params.validate()?;
    mde.opposing_pairs()?;
    let base = gaussian_kernel(params.sigma_i, params.kernel_radius)?;
    mde.directions()
        .iter()
        .map(|&theta| {
            Kernel::from_fn(params.kernel_radius, |u, v| {
                let (x, y) = offset_frame(u, v);
                base.weight(u, v) * mde_weight(x, y, theta)
            })
        })
        .collect()
}

/// (column, row) offset rotated by 5π/4.
fn offset_frame(u: isize, v: isize) -> (f64, f64) {
    let (c, r) = (u as f64, v as f64);
    ((-c + r) * FRAC_1_SQRT_2, (-c - r) * FRAC_1_SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weight_examples() {
        assert_eq!(mde_weight(0.0, 0.0, 1.234), 0.5);
        let want = 1.0 / (1.0 + (-(2f64).sqrt()).exp());
        assert!((mde_weight(1.0, 0.0, PI / 4.0) - want).abs() < 1e-12);
        assert!((mde_weight(1.0, 0.0, PI / 4.0) - 0.8044).abs() < 1e-4);
    }

    #[test]
    fn weight_antisymmetry() {
        for &(x, y, th) in &[(1.0, 2.0, 0.3), (-3.5, 0.25, 2.0), (6.0, -6.0, 5.5)] {
            let s = mde_weight(x, y, th) + mde_weight(-x, -y, th);
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn opposing_kernels_sum_to_isotropic() {
        let p = DpcParams::default();
        let mde = MdeParams::default();
        let ks = build_direction_kernels(&p, &mde).unwrap();
        let iso = gaussian_kernel(p.sigma_i, p.kernel_radius).unwrap();
        for (i, j) in mde.opposing_pairs().unwrap() {
            for ((a, b), w) in ks[i]
                .weights()
                .iter()
                .zip(ks[j].weights())
                .zip(iso.weights())
            {
                assert!((a + b - w).abs() < 1e-12);
            }
            let rot = ks[i].rotate_180();
            for (a, b) in rot.weights().iter().zip(ks[j].weights()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        for k in &ks {
            assert!((k.weight(0, 0) - 0.5 * iso.weight(0, 0)).abs() < 1e-15);
        }
    }

    #[test]
    fn inhibition_trails_preferred_direction() {
        let p = DpcParams::default();
        let ks = build_direction_kernels(&p, &MdeParams::default()).unwrap();
        // π/4 is up-right: column +, row −. The lobe sits down-left.
        let k = &ks[0];
        assert!(k.weight(-2, 2) > k.weight(2, -2));
        // 3π/4 is up-left, lobe down-right
        let k = &ks[1];
        assert!(k.weight(2, 2) > k.weight(-2, -2));
    }
}
