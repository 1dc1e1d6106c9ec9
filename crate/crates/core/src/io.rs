//! Station and route files.
//!
//! Stations: UTF-8 CSV with header `station_id,name,lat,lon,is_rrts,lines`;
//! `lines` is `|`-separated. Routes: header `route_id,direction,seq,station_id`,
//! one row per stop, `seq` strictly ascending within each (route_id, direction).

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::network::{Direction, Route, RouteTable, Station, StationTable};

pub const STATIONS_HEADER: [&str; 6] = ["station_id", "name", "lat", "lon", "is_rrts", "lines"];
pub const ROUTES_HEADER: [&str; 4] = ["route_id", "direction", "seq", "station_id"];

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(r)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, path: &Path, want: &[&str]) -> Result<()> {
    let header = rdr.headers().map_err(|e| parse_err(path, 1, e.to_string()))?;
    if header.iter().ne(want.iter().copied()) {
        return Err(parse_err(
            path,
            1,
            format!("expected header `{}`, found `{}`", want.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" => Some(true),
        "false" | "0" => Some(false),
        _ => None,
    }
}

pub fn load_stations(path: impl AsRef<Path>) -> Result<StationTable> {
    let path = path.as_ref();
    parse_stations(open(path)?, path)
}

/// Parses a stations file from any reader; `path` is used in messages only.
pub fn parse_stations<R: Read>(input: R, path: &Path) -> Result<StationTable> {
    let mut rdr = reader(input);
    check_header(&mut rdr, path, &STATIONS_HEADER)?;
    let mut table = StationTable::default();
    let mut first_line = std::collections::HashMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let id = rec[0].to_string();
        if id.is_empty() {
            return Err(parse_err(path, line, "empty station_id"));
        }
        let lat: f64 = rec[2].trim().parse().map_err(|_| parse_err(path, line, format!("bad lat {:?}", &rec[2])))?;
        let lon: f64 = rec[3].trim().parse().map_err(|_| parse_err(path, line, format!("bad lon {:?}", &rec[3])))?;
        if !(-90.0..=90.0).contains(&lat) {
            return Err(parse_err(path, line, format!("lat {lat} outside [-90, 90]")));
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(parse_err(path, line, format!("lon {lon} outside [-180, 180]")));
        }
        let is_rrts = parse_bool(&rec[4]).ok_or_else(|| parse_err(path, line, format!("bad is_rrts {:?}", &rec[4])))?;
        let lines: BTreeSet<String> = rec[5].split('|').filter(|l| !l.is_empty()).map(str::to_string).collect();
        if lines.is_empty() {
            return Err(parse_err(path, line, format!("station {id} has no lines")));
        }
        if let Some(prev) = first_line.insert(id.clone(), line) {
            return Err(parse_err(path, line, format!("duplicate station id {id} (first seen on line {prev})")));
        }
        table.push(Station {
            id,
            name: rec[1].to_string(),
            lat,
            lon,
            is_rrts,
            lines,
        })?;
    }
    Ok(table)
}

pub fn load_routes(path: impl AsRef<Path>, stations: &StationTable) -> Result<RouteTable> {
    let path = path.as_ref();
    parse_routes(open(path)?, path, stations)
}

pub fn parse_routes<R: Read>(input: R, path: &Path, stations: &StationTable) -> Result<RouteTable> {
    let mut rdr = reader(input);
    check_header(&mut rdr, path, &ROUTES_HEADER)?;
    // Groups in order of first appearance.
    let mut order: Vec<(String, Direction)> = Vec::new();
    let mut groups: BTreeMap<(String, Direction), Vec<(i64, String)>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let route_id = rec[0].to_string();
        if route_id.is_empty() {
            return Err(parse_err(path, line, "empty route_id"));
        }
        let direction: Direction = rec[1].parse().map_err(|e: String| parse_err(path, line, e))?;
        let seq: i64 = rec[2].trim().parse().map_err(|_| parse_err(path, line, format!("bad seq {:?}", &rec[2])))?;
        let station = rec[3].to_string();
        if !stations.contains(&station) {
            return Err(parse_err(
                path,
                line,
                format!("route {route_id}/{} references unknown station {station}", direction.as_str()),
            ));
        }
        let key = (route_id, direction);
        let stops = groups.entry(key.clone()).or_insert_with(|| {
            order.push(key.clone());
            Vec::new()
        });
        if let Some(&(prev, _)) = stops.last() {
            if seq <= prev {
                return Err(parse_err(
                    path,
                    line,
                    format!("route {}/{}: seq {seq} does not follow {prev}", key.0, key.1.as_str()),
                ));
            }
        }
        stops.push((seq, station));
    }
    let mut routes = Vec::with_capacity(order.len());
    for key in order {
        let stops = groups.remove(&key).unwrap();
        let route = Route {
            route_id: key.0,
            direction: key.1,
            stops: stops.into_iter().map(|(_, s)| s).collect(),
        };
        routes.push(route);
    }
    RouteTable::new(routes, stations)
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn csv_io(e: csv::Error) -> Error {
    Error::Invariant(format!("csv write failed: {e}"))
}

/// Canonical stations file: rows in table order, lines sorted, booleans as
/// `true`/`false`, coordinates in shortest round-trip form.
pub fn write_stations<W: Write>(out: W, table: &StationTable) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(STATIONS_HEADER).map_err(csv_io)?;
    for s in table.iter() {
        let lines = s.lines.iter().cloned().collect::<Vec<_>>().join("|");
        w.write_record([
            s.id.as_str(),
            s.name.as_str(),
            &s.lat.to_string(),
            &s.lon.to_string(),
            if s.is_rrts { "true" } else { "false" },
            &lines,
        ])
        .map_err(csv_io)?;
    }
    w.flush().map_err(|e| Error::Invariant(e.to_string()))
}

/// Canonical routes file: routes in table order, `seq` numbered from 1.
pub fn write_routes<W: Write>(out: W, table: &RouteTable) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(ROUTES_HEADER).map_err(csv_io)?;
    for r in table.iter() {
        for (i, s) in r.stops.iter().enumerate() {
            w.write_record([r.route_id.as_str(), r.direction.as_str(), &(i + 1).to_string(), s.as_str()])
                .map_err(csv_io)?;
        }
    }
    w.flush().map_err(|e| Error::Invariant(e.to_string()))
}

pub fn save_stations(path: impl AsRef<Path>, table: &StationTable) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_stations(std::io::BufWriter::new(f), table)
}

pub fn save_routes(path: impl AsRef<Path>, table: &RouteTable) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_routes(std::io::BufWriter::new(f), table)
}
