//! Frame-grid arithmetic: frames, kernels, zero-padded convolution and the
//! temporal ring buffer used for per-tap inhibition delays.

mod conv;
mod frame;
mod kernel;
mod ring;

pub use conv::{convolve, BoundaryPolicy};
pub use frame::{Frame, FrameSequence};
pub use kernel::{delay_map, gaussian_kernel, DelayMap, Kernel};
pub use ring::{delayed_lookup, FrameRing};
