//! JSON files: lattices, error supports and decode verdicts.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::{ErrorSupport, ResidualClass};
use crate::colex::{Colex, Geometry};
use crate::color::Color;
use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::pipeline::DecodeFailure;

pub const LATTICE_FORMAT: &str = "colorproj-lattice";
pub const LATTICE_VERSION: u32 = 1;

/// On-disk form of a colex. Faces are cyclic edge lists, cells face lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub format: String,
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_size: Option<usize>,
    pub num_vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
    pub cells: Vec<Vec<usize>>,
    pub cell_colors: Vec<Color>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
}

impl LatticeFile {
    pub fn from_colex(colex: &Colex, lattice_size: Option<usize>) -> Self {
        let cx = colex.complex();
        Self {
            format: LATTICE_FORMAT.into(),
            version: LATTICE_VERSION,
            lattice_size,
            num_vertices: cx.num_vertices(),
            edges: cx.edges().to_vec(),
            faces: cx.faces().to_vec(),
            cells: cx.cells().to_vec(),
            cell_colors: colex.cell_colors().to_vec(),
            geometry: colex.geometry().cloned(),
        }
    }

    /// Checks the header only; structural problems are left to validation.
    pub fn into_colex(self) -> Result<Colex> {
        if self.format != LATTICE_FORMAT {
            return Err(Error::Format(format!(
                "expected format `{LATTICE_FORMAT}`, found `{}`",
                self.format
            )));
        }
        if self.version != LATTICE_VERSION {
            return Err(Error::Format(format!(
                "unsupported lattice version {} (this build reads {LATTICE_VERSION})",
                self.version
            )));
        }
        let complex = CellComplex::new(self.num_vertices, self.edges, self.faces, self.cells);
        let colex = Colex::new(complex, self.cell_colors);
        Ok(match self.geometry {
            Some(g) => colex.with_geometry(g),
            None => colex,
        })
    }
}

pub fn save_lattice(path: impl AsRef<Path>, colex: &Colex, lattice_size: Option<usize>) -> Result<()> {
    let json = serde_json::to_string(&LatticeFile::from_colex(colex, lattice_size))?;
    fs::write(path, json)?;
    Ok(())
}

pub fn load_lattice(path: impl AsRef<Path>) -> Result<LatticeFile> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// `{"x": [...], "z": [...]}` qubit index lists; a qubit in both is a Y.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorFile {
    #[serde(default)]
    pub x: Vec<usize>,
    #[serde(default)]
    pub z: Vec<usize>,
}

impl ErrorFile {
    pub fn from_support(e: &ErrorSupport) -> Self {
        Self {
            x: e.x.to_indices(),
            z: e.z.to_indices(),
        }
    }

    /// Rejects out-of-range and repeated qubit indices.
    pub fn to_support(&self, num_qubits: usize) -> Result<ErrorSupport> {
        for (name, list) in [("x", &self.x), ("z", &self.z)] {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            if let Some(&q) = sorted.iter().find(|&&q| q >= num_qubits) {
                return Err(Error::InvalidInput(format!(
                    "{name} qubit {q} out of range (code has {num_qubits})"
                )));
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("{name} list repeats a qubit")));
            }
        }
        Ok(ErrorSupport::from_indices(num_qubits, self.x.iter().copied(), self.z.iter().copied()))
    }
}

/// Result of decoding one error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub estimate: Option<ErrorFile>,
    pub residual_class: Option<ResidualClass>,
    pub failure_mode: Option<DecodeFailure>,
}
