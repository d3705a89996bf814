//! The detector chain: photoreceptor → DPC with direction-weighted
//! inhibition → zoned opposing-motion judgment → enhancement, plus the
//! isotropic D-LGMD baseline.

mod dpc;
mod mde;
mod omj;
mod params;
mod runner;

pub use dpc::{
    directional_dpc_step, dpc_step, photoreceptor, DirectionalDpc, DirectionalMaps, DpcKernels,
};
pub use mde::{build_direction_kernels, mde_weight};
pub use omj::{enhance, omj_step, periphery_mask, Omj, UnitField, UnitGrid};
pub use params::{
    DpcParams, EnhanceParams, GridSpec, MdeParams, OmjParams, OppLodParams, DLGMD_INHIBITION_GAIN,
    OPPLOD_INHIBITION_GAIN,
};
pub use runner::{run_dlgmd, run_opplod, DLgmd, OppLod, ResponseRecord, Roi, StepDetail};
