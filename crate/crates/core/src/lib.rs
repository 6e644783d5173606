pub mod error;
pub mod majorization;
pub mod matfun;
pub mod means;
pub mod sops;
pub mod symplectic;
pub mod theorems;
pub mod williamson;
