//! Integrators, quadrature and root refinement shared by the physics modules.

pub mod ode;
pub mod quadrature;
pub mod roots;

pub use ode::{Dopri5, OdeError, OdeSystem, Sample};
pub use quadrature::{integrate, kronrod15, integrate_pieces, QuadError, QuadOptions, QuadResult};
pub use roots::{refine_root, RootError};
