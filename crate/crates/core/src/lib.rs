//! Flag-based and Steane-type syndrome extraction for the [[7,1,3]] code on
//! nearest-neighbour grids: Pauli algebra, stabilizer simulation, circuit
//! construction, single-fault certification, protocol state machines and
//! Monte Carlo estimation of logical error rates.

pub mod circuit;
pub mod circuit_file;
pub mod code;
pub mod error;
pub mod frame;
pub mod library;
pub mod noise;
pub mod pauli;
pub mod protocol;
pub mod sim;
pub mod stats;
pub mod sweep;
pub mod tableau;
pub mod verify;

pub use error::{Error, Result};
