//! Green's functions, constant-sign regions and monotone iteration for
//! periodic first-order problems
//!
//! `v'(t) + m v(−t) + M v([t]) = h(t)`, `v(−T) = v(T)`,
//!
//! with `[·]` truncation toward zero, and for the companion ODE
//! `v' + m v + M v([t]) = h` on `[0, T]`.
//!
//! - [`closed_form`]: exact kernels and integrals.
//! - [`assembly`]: the kernel for arbitrary `T` via a cell matrix.
//! - [`region`]: classification of `(m, M)` by kernel sign.
//! - [`monotone`]: lower/upper solution iteration for nonlinear problems.

pub mod assembly;
pub mod closed_form;
pub mod error;
pub mod invariants;
pub mod monotone;
pub mod params;
pub mod quadrature;
pub mod region;
pub mod sided;

pub use assembly::{
    assemble, det_a, h_general, kernel_for, lloro_residual, AssembledKernel, CellLayout,
};
pub use closed_form::{q_bar, Kernel};
pub use error::{Error, Result, Singularity};
pub use params::{Family, KernelKind, ProblemParams};
pub use quadrature::{QuadMode, QuadratureCfg};
pub use region::{
    classify, classify_point, sweep_region, ClassifyOptions, RegionGrid, SignClass, Strategy,
};
pub use sided::{floor_tz, Side, SidedPoint};
