//! Pipeline behind the `qres` binary: tangent-cone analysis, resolution, lift, monodromy
//! and the verification battery.

pub mod cone;
pub mod pipeline;

pub use cone::{check_condition, detect_mk, sing_points, ConeError, ConePoint, ProjPoint};
pub use pipeline::{run, GermSpec, JobConfig, JobError, JobInput, Mode, ResultDocument};
