pub mod assembly;
pub mod config;
pub mod error;
pub mod flux;
pub mod fourier;
pub mod linalg;
pub mod majorant;
pub mod mesh;
pub mod pipeline;
pub mod report;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use pipeline::{run, run_example1, run_example2, solve_level, SolveOptions};
