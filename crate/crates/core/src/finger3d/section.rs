//! Cross-section slabs and their arc-length parameterisation.

use super::{FingerPointCloud, GeometryError};

/// Default slab thickness along `y`, in millimetres.
pub const DEFAULT_SLAB_MM: f64 = 0.25;
/// Slabs with fewer points are dropped.
pub const MIN_SECTION_POINTS: usize = 8;

/// Points closer than this along the arc are merged into one sample.
const MERGE_MM: f64 = 1e-9;

/// One slab of the finger, flattened into the `x-z` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    /// Mean `y` of the slab's points, mm.
    pub y_center: f64,
    /// Arc samples `(x, z)` in angular order, from the `-x` side to `+x`.
    pub arc_points: Vec<[f64; 2]>,
    /// Signed arc length of each sample from where the arc crosses `x = 0`,
    /// mm. When the arc never crosses the plane, lengths are measured from
    /// the first sample and [`CrossSection::crosses_reference`] is false.
    pub cumulative_geodesic: Vec<f64>,
    /// `(point index, arc sample)` for every cloud point in the slab.
    pub members: Vec<(usize, usize)>,
    crosses: bool,
}

impl CrossSection {
    /// Builds a section from `(point index, x, y, z)` samples of one slab.
    pub fn from_samples(samples: &[(usize, f64, f64, f64)]) -> Self {
        let n = samples.len() as f64;
        let y_center = samples.iter().map(|s| s.2).sum::<f64>() / n;
        let xc = samples.iter().map(|s| s.1).sum::<f64>() / n;
        let zc = samples.iter().map(|s| s.3).sum::<f64>() / n;
        // Viewpoint below the surface: the slab centroid pushed toward -z by
        // the lateral half extent, which keeps angles monotone for both
        // curved and flat arcs.
        let half_extent = samples.iter().map(|s| (s.1 - xc).abs()).fold(0.0, f64::max);
        let cz = zc - half_extent.max(1e-6);
        let mut order: Vec<(f64, usize)> = samples
            .iter()
            .enumerate()
            .map(|(i, s)| ((s.1 - xc).atan2(s.3 - cz), i))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut arc_points: Vec<[f64; 2]> = Vec::with_capacity(samples.len());
        let mut lengths: Vec<f64> = Vec::with_capacity(samples.len());
        let mut members = Vec::with_capacity(samples.len());
        for &(_, i) in &order {
            let (idx, x, _, z) = samples[i];
            match arc_points.last() {
                Some(last) if (last[0] - x).hypot(last[1] - z) <= MERGE_MM => {}
                Some(last) => {
                    let step = (last[0] - x).hypot(last[1] - z);
                    lengths.push(lengths.last().copied().unwrap_or(0.0) + step);
                    arc_points.push([x, z]);
                }
                None => {
                    lengths.push(0.0);
                    arc_points.push([x, z]);
                }
            }
            members.push((idx, arc_points.len() - 1));
        }

        let lengths = node_lengths(&arc_points, &lengths);
        let origin = reference_crossing(&arc_points, &lengths);
        let crosses = origin.is_some();
        let origin = origin.unwrap_or(0.0);
        let cumulative_geodesic = lengths.iter().map(|l| l - origin).collect();
        Self {
            y_center,
            arc_points,
            cumulative_geodesic,
            members,
            crosses,
        }
    }

    pub fn crosses_reference(&self) -> bool {
        self.crosses
    }

    pub fn len(&self) -> usize {
        self.arc_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arc_points.is_empty()
    }

    /// Outward unit normals `(nx, nz)` per arc sample from the local chord
    /// direction; outward is to the left of the `-x -> +x` traversal, i.e.
    /// toward `+z` at the crest.
    pub fn normals(&self) -> Vec<[f64; 2]> {
        let n = self.arc_points.len();
        (0..n)
            .map(|i| {
                if n < 2 {
                    return [0.0, 1.0];
                }
                let a = self.arc_points[i.saturating_sub(1)];
                let b = self.arc_points[(i + 1).min(n - 1)];
                let (tx, tz) = (b[0] - a[0], b[1] - a[1]);
                let len = tx.hypot(tz);
                [-tz / len, tx / len]
            })
            .collect()
    }
}

/// Arc length is measured along chords between nodes at least this far
/// apart; samples in between are placed by their share of the raw polyline.
/// Dense slabs that merge several rings zig-zag between them, and summing
/// every tiny step would overstate the length.
pub const GEODESIC_NODE_MM: f64 = 0.25;

fn node_lengths(arc: &[[f64; 2]], raw: &[f64]) -> Vec<f64> {
    let n = arc.len();
    let dist = |a: usize, b: usize| (arc[a][0] - arc[b][0]).hypot(arc[a][1] - arc[b][1]);
    let mut nodes = vec![0];
    for i in 1..n {
        if dist(i, *nodes.last().expect("non-empty")) >= GEODESIC_NODE_MM {
            nodes.push(i);
        }
    }
    if n > 1 && *nodes.last().expect("non-empty") != n - 1 {
        nodes.push(n - 1);
    }
    let mut out = vec![0.0; n];
    for pair in nodes.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let span = dist(a, b);
        let raw_span = raw[b] - raw[a];
        for i in a + 1..=b {
            out[i] = out[a] + span * (raw[i] - raw[a]) / raw_span;
        }
    }
    out
}

/// Outward normals estimated from chords spanning `half_span` mm of arc on
/// either side of each sample (clipped at the arc ends), which averages out
/// scan noise and the zig-zag of several rings merged into one slab. Each
/// normal is paired with the arc position it describes best, the midpoint of
/// its chord, which moves inward near the ends.
pub fn smoothed_normals(section: &CrossSection, half_span: f64) -> Vec<([f64; 2], f64)> {
    let u = &section.cumulative_geodesic;
    let p = &section.arc_points;
    let n = p.len();
    if n < 2 {
        return vec![([0.0, 1.0], u.first().copied().unwrap_or(0.0)); n];
    }
    let (mut a, mut b) = (0usize, 0usize);
    (0..n)
        .map(|i| {
            while u[a] < u[i] - half_span {
                a += 1;
            }
            while b + 1 < n && u[b + 1] <= u[i] + half_span {
                b += 1;
            }
            let (lo, hi) = if a == b {
                (i.saturating_sub(1), (i + 1).min(n - 1))
            } else {
                (a, b)
            };
            let (tx, tz) = (p[hi][0] - p[lo][0], p[hi][1] - p[lo][1]);
            let len = tx.hypot(tz);
            ([-tz / len, tx / len], 0.5 * (u[lo] + u[hi]))
        })
        .collect()
}

/// Arc length at which the polyline crosses `x = 0`. With several crossings
/// the one with the largest `z` wins.
fn reference_crossing(arc: &[[f64; 2]], lengths: &[f64]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |z: f64, s: f64| {
        if best.is_none_or(|(bz, _)| z > bz) {
            best = Some((z, s));
        }
    };
    for i in 0..arc.len() {
        let [x0, z0] = arc[i];
        if x0 == 0.0 {
            consider(z0, lengths[i]);
            continue;
        }
        if let Some(&[x1, z1]) = arc.get(i + 1) {
            if x1 != 0.0 && (x0 < 0.0) != (x1 < 0.0) {
                let t = x0 / (x0 - x1);
                consider(z0 + t * (z1 - z0), lengths[i] + t * (lengths[i + 1] - lengths[i]));
            }
        }
    }
    best.map(|(_, s)| s)
}

/// Bins a rectified cloud into `y` slabs of width `slab` starting at the
/// smallest `y`; slabs with fewer than [`MIN_SECTION_POINTS`] points are dropped.
pub fn slice_sections(pc: &FingerPointCloud, slab: f64) -> Result<Vec<CrossSection>, GeometryError> {
    if !(slab > 0.0 && slab.is_finite()) {
        return Err(GeometryError::Parameter(format!("slab width must be positive, got {slab}")));
    }
    if pc.is_empty() {
        return Err(GeometryError::EmptySections("(empty cloud)".into()));
    }
    let y_min = pc.points().iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let mut bins: std::collections::BTreeMap<u64, Vec<(usize, f64, f64, f64)>> = Default::default();
    for (i, p) in pc.points().iter().enumerate() {
        let bin = ((p.y - y_min) / slab).floor() as u64;
        bins.entry(bin).or_default().push((i, p.x, p.y, p.z));
    }
    let sections: Vec<CrossSection> = bins
        .values()
        .filter(|s| s.len() >= MIN_SECTION_POINTS)
        .map(|s| CrossSection::from_samples(s))
        .collect();
    if sections.is_empty() {
        return Err(GeometryError::EmptySections(format!(
            "(every slab has fewer than {MIN_SECTION_POINTS} points)"
        )));
    }
    Ok(sections)
}
