pub mod specfun;
pub mod cosmology;
pub mod paulicompile;
pub mod simcore;
pub mod mitigation;
