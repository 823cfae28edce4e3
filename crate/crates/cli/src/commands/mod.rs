pub mod matrix;
pub mod szego;
pub mod verify;

pub use matrix::{build_matrices, cmd_matrix, MatrixDiagnostics, MatrixOutput};
pub use szego::{cmd_szego, experiment_config, render_outputs};
pub use verify::{cmd_verify, verify_suite, VerifyReport};
