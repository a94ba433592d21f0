//! Typed data model and file ingestion for the two-area hydrothermal system:
//! cascaded reservoirs and plants, thermal units, HVDC cables, loads, inflows
//! and water-value cuts. Instances are immutable after loading and safe to
//! share across threads.

mod error;
#[cfg(feature = "fixtures")]
pub mod fixtures;
mod parse;
mod types;
mod validate;
mod write;

pub use error::SystemError;
pub use parse::{load_system, load_system_with, parse_system_text, raw_load_samples, LoadOptions};
pub use types::{
    Area, Cable, Cut, DischargeSegment, Horizon, HydroPlant, Penalties, Reservoir, RouteTarget,
    SystemInstance, ThermalUnit, Waterway,
};
pub use validate::{validate_topology, Diagnostic};
pub use write::{system_to_string, write_system, write_system_file};
