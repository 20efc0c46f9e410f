//! Spectral theory and functional calculi over Clifford algebras.

pub mod cauchy;
pub mod clifford;
pub mod dsl;
pub mod error;
pub mod job;
pub mod linalg;
pub mod operator;
pub mod sampling;
pub mod scalar;
pub mod spectral;
pub mod stem;
pub mod suites;

pub use cauchy::{Contour, ContourPolicy, QuadratureOptions};
pub use clifford::{BasisIndex, CMultivector, Multivector, Paravector};
pub use linalg::ComplexMatrix;
pub use operator::CliffordOperator;
pub use error::{Error, ErrorClass, Result};
pub use scalar::{Cx, Real};
pub use spectral::{Sign, SpectralData};
pub use stem::{PlanarDomain, StemFunction, StemKind};

pub type Multivector64 = Multivector<f64>;
pub type CMultivector64 = CMultivector<f64>;
pub type Paravector64 = Paravector<f64>;
pub type Multivector32 = Multivector<f32>;
pub type CMultivector32 = CMultivector<f32>;
pub type Paravector32 = Paravector<f32>;
pub type PlanarDomain64 = PlanarDomain<f64>;
pub type StemFunction64 = StemFunction<f64>;
pub type Contour64 = Contour<f64>;
pub type CliffordOperator64 = CliffordOperator<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
