//! C ABI for `railnet`.
//!
//! Conventions:
//! - Every fallible call returns a [`RailnetStatus`]; results go through out-pointers.
//! - On failure, [`railnet_last_error`] describes the most recent error on the calling thread.
//! - Networks are opaque [`RailnetNetwork`] handles released with [`railnet_network_free`].
//! - Per-node and per-edge outputs are written into caller-owned buffers whose
//!   length must equal the node or edge count exactly.
//! - Strings returned by the library are released with [`railnet_string_free`].
//! - Panics never cross the boundary; they surface as `RAILNET_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use railnet::bridges::{all_bridge_values, BridgeValue};
use railnet::centrality::{betweenness_all, closeness_in, closeness_out};
use railnet::io::{load_routes, load_stations};
use railnet::metrics::{summarize, SourceSample};
use railnet::{build_network, remove_rrts, rrts_subnetwork, Error, TransitNetwork};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RailnetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A caller buffer length does not match the node or edge count.
    BufferSize = 3,
    Io = 4,
    Parse = 5,
    Ingestion = 6,
    Domain = 7,
    Config = 8,
    Internal = 9,
    Panic = 10,
}

/// Opaque network handle.
pub struct RailnetNetwork {
    inner: TransitNetwork,
}

/// Descriptive statistics; `assortativity` is NaN when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RailnetMetrics {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub in_deg_median: f64,
    pub out_deg_median: f64,
    pub avg_shortest_path: f64,
    pub reachable_pair_fraction: f64,
    pub clustering: f64,
    pub assortativity: f64,
    /// 0 when every node was a BFS source.
    pub sampled_sources: usize,
}

/// Bridge value written for edges whose deletion disconnects their endpoints.
pub const RAILNET_BRIDGE_DISCONNECTED: i64 = -1;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(RailnetStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io { .. } => RailnetStatus::Io,
            Error::Parse { .. } => RailnetStatus::Parse,
            Error::Ingestion(_) => RailnetStatus::Ingestion,
            Error::Domain(_) => RailnetStatus::Domain,
            Error::Config(_) => RailnetStatus::Config,
            Error::Invariant(_) => RailnetStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: RailnetStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, converting errors and panics into a status plus last-error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RailnetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RailnetStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            RailnetStatus::Panic
        }
    }
}

unsafe fn network<'a>(g: *const RailnetNetwork) -> Result<&'a TransitNetwork, Failure> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| fail(RailnetStatus::NullPointer, "network handle is null"))
}

unsafe fn path_arg(p: *const c_char, what: &str) -> Result<PathBuf, Failure> {
    if p.is_null() {
        return Err(fail(RailnetStatus::NullPointer, format!("{what} path is null")));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| fail(RailnetStatus::InvalidArgument, format!("{what} path is not UTF-8")))?;
    Ok(PathBuf::from(s))
}

unsafe fn out_slice<'a, T>(buf: *mut T, len: usize, want: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if buf.is_null() {
        return Err(fail(RailnetStatus::NullPointer, format!("{what} buffer is null")));
    }
    if len != want {
        return Err(fail(RailnetStatus::BufferSize, format!("{what} buffer holds {len}, need {want}")));
    }
    Ok(std::slice::from_raw_parts_mut(buf, len))
}

fn boxed(out: *mut *mut RailnetNetwork, g: TransitNetwork) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(RailnetStatus::NullPointer, "output handle pointer is null"));
    }
    unsafe { *out = Box::into_raw(Box::new(RailnetNetwork { inner: g })) };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn railnet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn railnet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads station and route files and builds the full network.
///
/// # Safety
/// Paths must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn railnet_network_load(
    stations_path: *const c_char,
    routes_path: *const c_char,
    proximity_m: f64,
    out: *mut *mut RailnetNetwork,
) -> RailnetStatus {
    guard(|| {
        let stations = load_stations(path_arg(stations_path, "stations")?)?;
        let routes = load_routes(path_arg(routes_path, "routes")?, &stations)?;
        boxed(out, build_network(&stations, &routes, proximity_m)?)
    })
}

/// Builds a network on nodes `0..n` from parallel source/target arrays.
///
/// # Safety
/// `sources` and `targets` must each hold `m` elements (may be NULL when `m == 0`).
#[no_mangle]
pub unsafe extern "C" fn railnet_network_from_edges(
    n: usize,
    sources: *const u32,
    targets: *const u32,
    m: usize,
    out: *mut *mut RailnetNetwork,
) -> RailnetStatus {
    guard(|| {
        let pairs: Vec<(u32, u32)> = if m == 0 {
            Vec::new()
        } else {
            if sources.is_null() || targets.is_null() {
                return Err(fail(RailnetStatus::NullPointer, "edge arrays are null"));
            }
            let (s, t) = (std::slice::from_raw_parts(sources, m), std::slice::from_raw_parts(targets, m));
            s.iter().copied().zip(t.iter().copied()).collect()
        };
        let g = TransitNetwork::from_edge_list(n, &pairs).map_err(|e| Failure(RailnetStatus::InvalidArgument, e.to_string()))?;
        boxed(out, g)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn railnet_network_free(g: *mut RailnetNetwork) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// New handle for the network without rail stations.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn railnet_network_without_rail(g: *const RailnetNetwork, out: *mut *mut RailnetNetwork) -> RailnetStatus {
    guard(|| boxed(out, remove_rrts(network(g)?)))
}

/// New handle for the rail-only subnetwork.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn railnet_network_rail_only(g: *const RailnetNetwork, out: *mut *mut RailnetNetwork) -> RailnetStatus {
    guard(|| boxed(out, rrts_subnetwork(network(g)?)))
}

/// # Safety
/// `g` must be a live handle; `nodes` and `edges` must be writable.
#[no_mangle]
pub unsafe extern "C" fn railnet_network_size(g: *const RailnetNetwork, nodes: *mut usize, edges: *mut usize) -> RailnetStatus {
    guard(|| {
        let g = network(g)?;
        if nodes.is_null() || edges.is_null() {
            return Err(fail(RailnetStatus::NullPointer, "size outputs are null"));
        }
        *nodes = g.node_count();
        *edges = g.edge_count();
        Ok(())
    })
}

/// Station id of node `v` as a new string; free it with [`railnet_string_free`].
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn railnet_station_id(g: *const RailnetNetwork, v: u32, out: *mut *mut c_char) -> RailnetStatus {
    guard(|| {
        let g = network(g)?;
        if out.is_null() {
            return Err(fail(RailnetStatus::NullPointer, "output string pointer is null"));
        }
        if v as usize >= g.node_count() {
            return Err(fail(RailnetStatus::InvalidArgument, format!("node {v} out of range")));
        }
        let id = CString::new(g.station(v).id.clone()).map_err(|_| fail(RailnetStatus::Internal, "station id holds NUL"))?;
        *out = id.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn railnet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Descriptive statistics. `sample_sources == 0` sweeps every node as a BFS source.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn railnet_metrics(
    g: *const RailnetNetwork,
    sample_sources: usize,
    seed: u64,
    out: *mut RailnetMetrics,
) -> RailnetStatus {
    guard(|| {
        let g = network(g)?;
        if out.is_null() {
            return Err(fail(RailnetStatus::NullPointer, "metrics output is null"));
        }
        let sample = match sample_sources {
            0 => SourceSample::Exact,
            count => SourceSample::Sampled { count, seed },
        };
        let r = summarize(g, sample)?;
        *out = RailnetMetrics {
            n_nodes: r.n_nodes,
            n_edges: r.n_edges,
            in_deg_median: r.in_deg_median,
            out_deg_median: r.out_deg_median,
            avg_shortest_path: r.avg_shortest_path,
            reachable_pair_fraction: r.reachable_pair_fraction,
            clustering: r.clustering,
            assortativity: r.assortativity.unwrap_or(f64::NAN),
            sampled_sources: r.sampled_sources,
        };
        Ok(())
    })
}

/// Betweenness of every node into `out[0..len]`, `len` = node count.
///
/// # Safety
/// `g` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn railnet_betweenness(g: *const RailnetNetwork, out: *mut f64, len: usize) -> RailnetStatus {
    guard(|| {
        let g = network(g)?;
        out_slice(out, len, g.node_count(), "betweenness")?.copy_from_slice(&betweenness_all(g).scores);
        Ok(())
    })
}

/// Closeness of every node; `incoming` selects distances towards the node rather than from it.
///
/// # Safety
/// `g` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn railnet_closeness(g: *const RailnetNetwork, incoming: bool, out: *mut f64, len: usize) -> RailnetStatus {
    guard(|| {
        let g = network(g)?;
        let buf = out_slice(out, len, g.node_count(), "closeness")?;
        let scores = if incoming { closeness_in(g)? } else { closeness_out(g)? };
        buf.copy_from_slice(&scores.scores);
        Ok(())
    })
}

/// Edge endpoints in canonical edge order, the order used by [`railnet_bridge_values`].
///
/// # Safety
/// `g` must be a live handle; both buffers must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn railnet_edges(g: *const RailnetNetwork, sources: *mut u32, targets: *mut u32, len: usize) -> RailnetStatus {
    guard(|| {
        let g = network(g)?;
        let s = out_slice(sources, len, g.edge_count(), "sources")?;
        let t = out_slice(targets, len, g.edge_count(), "targets")?;
        for (i, e) in g.edges().iter().enumerate() {
            s[i] = e.source;
            t[i] = e.target;
        }
        Ok(())
    })
}

/// Local bridge value of every edge; [`RAILNET_BRIDGE_DISCONNECTED`] marks edges
/// whose removal disconnects their endpoints.
///
/// # Safety
/// `g` must be a live handle; `out` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn railnet_bridge_values(g: *const RailnetNetwork, out: *mut i64, len: usize) -> RailnetStatus {
    guard(|| {
        let g = network(g)?;
        let buf = out_slice(out, len, g.edge_count(), "bridge")?;
        for (slot, r) in buf.iter_mut().zip(all_bridge_values(g)) {
            *slot = match r.value {
                BridgeValue::Finite(d) => d as i64,
                BridgeValue::Disconnected => RAILNET_BRIDGE_DISCONNECTED,
            };
        }
        Ok(())
    })
}
