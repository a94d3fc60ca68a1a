//! The ring Λ = Z[t, 1/t] with the involution t -> 1/t, its localization
//! Λ₀ = Z[t, 1/t, 1/(t-1)], and square matrices over both.

mod lambda0;
mod matrix;
mod poly;

pub use lambda0::Lambda0Scalar;
pub use matrix::{HermitianLambdaMatrix, Lambda0Matrix, LambdaMatrix};
pub use poly::{alexander_from_seifert, LaurentError, LaurentPoly};

pub(crate) use poly::seifert_characteristic_matrix;
