use super::{Frame, Kernel};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Pixels outside the image read as zero.
    #[default]
    ZeroPad,
}

/// `out(x,y) = Σ in(x−u, y−v)·w(u,v)`; output has the input's dimensions.
pub fn convolve(frame: &Frame, kernel: &Kernel, boundary: BoundaryPolicy) -> Result<Frame> {
    let BoundaryPolicy::ZeroPad = boundary;
    let mut out = Frame::zeros(frame.width(), frame.height(), frame.t())?;
    if frame.is_zero() {
        return Ok(out);
    }
    for (u, v, w) in kernel.taps() {
        accumulate_tap(
            out.data_mut(),
            frame.data(),
            frame.width(),
            frame.height(),
            u,
            v,
            w,
        );
    }
    Ok(out)
}

/// Adds `weight · src(x−u, y−v)` into `out` wherever the source pixel exists.
///
/// Both buffers are `width × height`, row-major.
pub(crate) fn accumulate_tap(
    out: &mut [f64],
    src: &[f64],
    width: usize,
    height: usize,
    u: isize,
    v: isize,
    weight: f64,
) {
    if weight == 0.0 {
        return;
    }
    let (w, h) = (width as isize, height as isize);
    let (x0, x1) = (u.max(0), (w + u).min(w));
    let (y0, y1) = (v.max(0), (h + v).min(h));
    if x0 >= x1 || y0 >= y1 {
        return;
    }
    let (x0, x1) = (x0 as usize, x1 as usize);
    let sx0 = (x0 as isize - u) as usize;
    let span = x1 - x0;
    for y in y0 as usize..y1 as usize {
        let sy = (y as isize - v) as usize;
        let dst = &mut out[y * width + x0..y * width + x0 + span];
        let s = &src[sy * width + sx0..sy * width + sx0 + span];
        for (d, &p) in dst.iter_mut().zip(s) {
            *d += weight * p;
        }
    }
}
