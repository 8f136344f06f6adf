pub mod algebra;
pub mod almost_abelian;
pub mod catalog;
pub mod conditions;
pub mod connection;
pub mod error;
pub mod feasibility;
pub mod forms;
pub mod fuzz;
pub mod hermitian;
pub mod identities;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod spec_file;
