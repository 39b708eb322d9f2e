//! Points, dimensions, and axis-aligned boxes shared by the quadrature,
//! potential, and integral-operator layers.
//!
//! A [`Point`] always stores two coordinates; in dimension one the second
//! coordinate is zero by construction, so the Euclidean distance doubles as
//! `|x − y|` on the line without case analysis.

use thiserror::Error;

/// Spatial dimension of the problem; the operators live on ℝ or ℝ².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    /// Number of coordinates of a point in this dimension.
    pub fn ncoords(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.ncoords())
    }
}

/// A point of ℝ¹ or ℝ². One-dimensional points carry a zero second coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 2],
}

impl Point {
    /// Point on the line.
    pub fn one_d(x: f64) -> Self {
        Point { coords: [x, 0.0] }
    }

    /// Point in the plane.
    pub fn two_d(x: f64, y: f64) -> Self {
        Point { coords: [x, y] }
    }

    /// Coordinate along `axis` (0 or 1).
    pub fn coord(self, axis: usize) -> f64 {
        self.coords[axis]
    }

    /// Both stored coordinates.
    pub fn coords(self) -> [f64; 2] {
        self.coords
    }

    /// Euclidean distance; reduces to `|x − y|` for points on the line.
    pub fn dist(self, other: Point) -> f64 {
        let dx = self.coords[0] - other.coords[0];
        let dy = self.coords[1] - other.coords[1];
        dx.hypot(dy)
    }
}

/// Geometry construction failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    /// A box edge has zero, negative, or non-finite length.
    #[error("degenerate box: extent along axis {axis} is {extent:e} (must be positive and finite)")]
    DegenerateExtent { axis: usize, extent: f64 },
}

/// An axis-aligned box: an interval in ℝ¹ or a rectangle in ℝ².
///
/// Boxes bound quadrature domains and potential supports. Containment is
/// closed (boundary points count as inside); all extents are strictly
/// positive by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBox {
    dim: Dim,
    lo: [f64; 2],
    hi: [f64; 2],
}

impl SupportBox {
    /// Interval `[lo, hi]` on the line.
    pub fn interval(lo: f64, hi: f64) -> Result<Self, GeomError> {
        Self::build(Dim::One, [lo, 0.0], [hi, 1.0])
    }

    /// Rectangle `[lo[0], hi[0]] × [lo[1], hi[1]]` in the plane.
    pub fn rectangle(lo: [f64; 2], hi: [f64; 2]) -> Result<Self, GeomError> {
        Self::build(Dim::Two, lo, hi)
    }

    fn build(dim: Dim, lo: [f64; 2], hi: [f64; 2]) -> Result<Self, GeomError> {
        for axis in 0..dim.ncoords() {
            let extent = hi[axis] - lo[axis];
            if !(extent.is_finite() && extent > 0.0) {
                return Err(GeomError::DegenerateExtent { axis, extent });
            }
        }
        Ok(SupportBox { dim, lo, hi })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Lower corner (second coordinate meaningful only in 2D).
    pub fn lo(&self) -> [f64; 2] {
        self.lo
    }

    /// Upper corner (second coordinate meaningful only in 2D).
    pub fn hi(&self) -> [f64; 2] {
        self.hi
    }

    /// Edge length along `axis`.
    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    /// Length (1D) or area (2D).
    pub fn volume(&self) -> f64 {
        (0..self.dim.ncoords()).map(|a| self.extent(a)).product()
    }

    /// Closed containment test.
    pub fn contains(&self, p: Point) -> bool {
        (0..self.dim.ncoords())
            .all(|a| self.lo[a] <= p.coord(a) && p.coord(a) <= self.hi[a])
    }

    /// Whether this box contains `other` entirely (same dimension required).
    pub fn covers(&self, other: &SupportBox) -> bool {
        self.dim == other.dim
            && (0..self.dim.ncoords())
                .all(|a| self.lo[a] <= other.lo[a] && other.hi[a] <= self.hi[a])
    }
}
