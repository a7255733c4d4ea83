//! Reproduction harness: parameter sweeps over the gain ratio and the power
//! budget, flat-file output, and the solver-versus-oracle verification run.

pub mod csv;
pub mod svg;
pub mod sweep;
pub mod verify;

pub use self::csv::{emit_csv, parse_csv, to_csv_string, CSV_HEADER};
pub use svg::{render_svg, svg_document, Chart};
pub use sweep::{cnr_from_beta, db_to_linear, run_sweep, SweepRow, SweepSpec};
pub use verify::{run_verification, sample_instances, ClaimOutcome, Instance, VerifyOptions, VerifyReport};
