//! Decoding 3D color codes by projecting them onto 3D toric codes.
//!
//! The pipeline works entirely on the dual `Γ*` of a 3-colex `Γ`, where
//! qubits are tetrahedra, X-type checks are vertices and Z-type checks are
//! edges. X-error syndromes are restricted to the four single-color minors
//! and decoded there as surface problems; Z-error syndromes are restricted
//! to the six two-color minors and decoded by matching. The component
//! estimates are reassembled into the face boundary of the error volume,
//! which is then lifted back to a set of qubits.
//!
//! ```no_run
//! use colorproj::{build_bcc_colex, ColorCodeDecoder, DecoderConfig, ErrorSupport};
//!
//! let colex = build_bcc_colex(2).unwrap();
//! let decoder = ColorCodeDecoder::new(&colex, DecoderConfig::default()).unwrap();
//! let n = decoder.code().num_qubits();
//! let error = ErrorSupport::from_indices(n, [3], [7]);
//! let syndrome = decoder.code().syndrome_of(&error).unwrap();
//! let estimate = decoder.decode(&syndrome).unwrap();
//! println!("{:?}", decoder.code().residual_class(&error, &estimate));
//! ```

pub mod code;
pub mod colex;
pub mod color;
pub mod complex;
pub mod dual;
pub mod error;
pub mod gf2;
pub mod io;
pub mod minors;
pub mod pipeline;
pub mod sim;
pub mod toric;

pub use code::{ColorCode, ErrorSupport, ResidualClass, StabilizerMatrices, Syndrome};
pub use colex::{build_bcc_colex, validate_colex, Colex, ValidationReport};
pub use color::{Color, ColorPair};
pub use complex::{CellComplex, Violation};
pub use dual::{dual, DualComplex};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vector};
pub use io::{load_lattice, save_lattice, ErrorFile, LatticeFile, Verdict};
pub use minors::{edge_boundary, face_boundary, minor_c, minor_cc, minor_pair, MinorComplexC, MinorComplexCC};
pub use pipeline::{
    lift_boundary, ColorCodeDecoder, DecodeFailure, DecodeStats, EdgeBoundaryEstimate, FaceBoundaryEstimate, MinorId,
};
pub use sim::{run_trials, sweep, ExecMode, NoiseModel, SweepOptions, SweepPoint, SweepReport, TrialRecord};
pub use toric::{DecoderConfig, DecoderKind, ToricFailure, ToricXInstance, ToricZInstance};
