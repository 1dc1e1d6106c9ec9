//! Geographic coordinates and great-circle distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius (IUGG), meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoCoord {
    pub lat: f64,
    pub lon: f64,
}

impl GeoCoord {
    /// Validated constructor; latitude must lie in [-90, 90] and longitude in [-180, 180].
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        let c = GeoCoord { lat, lon };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-90.0..=90.0).contains(&self.lat) {
            return Err(Error::domain(format!("latitude {} outside [-90, 90]", self.lat)));
        }
        if !(-180.0..=180.0).contains(&self.lon) {
            return Err(Error::domain(format!("longitude {} outside [-180, 180]", self.lon)));
        }
        Ok(())
    }
}

/// Great-circle distance in meters between two coordinates.
pub fn haversine_distance(a: GeoCoord, b: GeoCoord) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    Ok(haversine_unchecked(a, b))
}

/// Haversine without bounds checks, for coordinates already validated at ingestion.
#[inline]
pub(crate) fn haversine_unchecked(a: GeoCoord, b: GeoCoord) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dphi = (b.lat - a.lat).to_radians();
    let dlambda = (b.lon - a.lon).to_radians();
    let s1 = (dphi * 0.5).sin();
    let s2 = (dlambda * 0.5).sin();
    let h = (s1 * s1 + phi1.cos() * phi2.cos() * s2 * s2).clamp(0.0, 1.0);
    2.0 * EARTH_RADIUS_M * h.sqrt().asin()
}

/// Uniform lat/lon bucketing so that every pair closer than `radius_m` lies in
/// the same or an adjacent cell (longitude wraps at the antimeridian).
pub(crate) struct ProximityGrid {
    lat_cell_deg: f64,
    lon_cells: i64,
    cells: std::collections::HashMap<(i64, i64), Vec<u32>>,
}

impl ProximityGrid {
    pub(crate) fn new(points: &[GeoCoord], radius_m: f64) -> Self {
        let radius_deg = (radius_m / EARTH_RADIUS_M).to_degrees().max(1e-9);
        let max_abs_lat = points.iter().map(|p| p.lat.abs()).fold(0.0_f64, f64::max);
        // A cell must be at least `radius_m` wide at the most poleward latitude present.
        let cos_lat = max_abs_lat.min(89.999).to_radians().cos();
        let lon_cell_deg = radius_deg / cos_lat;
        let lon_cells = ((360.0 / lon_cell_deg).floor() as i64).max(1);
        let mut grid = ProximityGrid {
            lat_cell_deg: radius_deg,
            lon_cells,
            cells: std::collections::HashMap::new(),
        };
        for (i, p) in points.iter().enumerate() {
            let key = grid.cell_of(*p);
            grid.cells.entry(key).or_default().push(i as u32);
        }
        grid
    }

    fn cell_of(&self, p: GeoCoord) -> (i64, i64) {
        let row = ((p.lat + 90.0) / self.lat_cell_deg).floor() as i64;
        let col = (((p.lon + 180.0) / 360.0) * self.lon_cells as f64).floor() as i64;
        (row, col.rem_euclid(self.lon_cells))
    }

    /// Candidate neighbors of `p` (a superset of all points within the radius).
    pub(crate) fn candidates(&self, p: GeoCoord, out: &mut Vec<u32>) {
        out.clear();
        let (row, col) = self.cell_of(p);
        let mut cols = [col - 1, col, col + 1].map(|c| c.rem_euclid(self.lon_cells));
        cols.sort_unstable();
        let n_cols = if self.lon_cells < 3 {
            let mut k = 1;
            for i in 1..3 {
                if cols[i] != cols[k - 1] {
                    cols[k] = cols[i];
                    k += 1;
                }
            }
            k
        } else {
            3
        };
        for r in row - 1..=row + 1 {
            for &c in &cols[..n_cols] {
                if let Some(bucket) = self.cells.get(&(r, c)) {
                    out.extend_from_slice(bucket);
                }
            }
        }
    }
}
