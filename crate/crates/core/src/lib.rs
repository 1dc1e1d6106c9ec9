//! Construction and analysis of city-scale public-transport networks, focused
//! on how much a rapid-rail subsystem contributes to the whole.
//!
//! The pipeline: [`network::build_network`] turns station and route tables into
//! a directed graph; [`metrics`] describes it; [`null_model`] randomizes it;
//! [`bridges`], [`centrality`], [`community`], and [`epidemics`] measure the
//! rail stations' role; [`io`] and [`pipeline`] handle files and orchestration.

pub mod bfs;
pub mod bridges;
pub mod centrality;
pub mod community;
pub mod epidemics;
pub mod error;
pub mod format;
pub mod geo;
pub mod io;
pub mod metrics;
pub mod network;
pub mod null_model;
mod par;
pub mod pipeline;
pub mod projection;
pub mod synthetic;
#[doc(hidden)]
pub mod testing;
pub mod ttest;

pub use error::{Error, Result};
pub use network::{build_network, remove_rrts, rrts_subnetwork, NodeId, Route, RouteTable, Station, StationTable, TransitNetwork};
