//! The algebra `Cl_n` (`e_j^2 = -1`, anticommuting generators) and its complexification.

mod basis;
mod format;
mod multivector;

pub use basis::{basis_mul, BasisIndex, MAX_RANK};
pub use format::{
    cmultivector_from_json, cmultivector_to_json, complex_from_json, complex_to_json,
    multivector_from_json, multivector_to_json, parse_multivector, parse_paravector,
};
pub use multivector::{CMultivector, Multivector, Paravector};

pub(crate) use basis::blade_product;
