pub mod diag;
pub mod gen;
pub mod model;
pub mod olap;
pub mod sema;
pub mod syntax;
