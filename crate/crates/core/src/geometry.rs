//! Points, boxes and random clouds in the unit cube.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// A single point, used where one is passed by value (box corners, queries).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension {
                got: 0,
                reason: "a point needs at least one coordinate",
            });
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// An ordered collection of points of a common dimension, stored row-major.
///
/// The order is meaningful: it is the arrival order for on-line graphs and the
/// point index used by every graph edge.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Result<Self> {
        Self::from_flat(dim, Vec::new())
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                got: 0,
                reason: "dimension must be at least 1",
            });
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidInput(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut set = Self::new(dim)?;
        for row in rows {
            set.push(row.as_ref())?;
        }
        Ok(set)
    }

    pub fn push(&mut self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::InvalidDimension {
                got: point.len(),
                reason: "point dimension differs from the set",
            });
        }
        self.coords.extend_from_slice(point);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn last_coord(&self, i: usize) -> f64 {
        self.coords[(i + 1) * self.dim - 1]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Indices sorted by ascending last coordinate, ties by index.
    pub fn ascending_last_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.last_coord(a).total_cmp(&self.last_coord(b)).then(a.cmp(&b)));
        order
    }

    /// The points listed in `order`.
    pub fn permuted(&self, order: &[usize]) -> PointSet {
        let mut coords = Vec::with_capacity(order.len() * self.dim);
        for &i in order {
            coords.extend_from_slice(self.get(i));
        }
        PointSet { dim: self.dim, coords }
    }

    pub fn scaled(&self, factor: f64) -> PointSet {
        PointSet {
            dim: self.dim,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn translated(&self, shift: &[f64]) -> Result<PointSet> {
        if shift.len() != self.dim {
            return Err(Error::InvalidDimension {
                got: shift.len(),
                reason: "translation vector dimension differs from the set",
            });
        }
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(shift).map(|(a, b)| a + b))
            .collect();
        Ok(PointSet { dim: self.dim, coords })
    }

    /// First pair (in ascending last-coordinate order) sharing a last coordinate.
    pub fn find_duplicate_last(&self) -> Option<(usize, usize)> {
        let order = self.ascending_last_order();
        order
            .windows(2)
            .find(|w| self.last_coord(w[0]) == self.last_coord(w[1]))
            .map(|w| (w[0], w[1]))
    }
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Poisson,
    Binomial,
}

impl Process {
    pub fn name(self) -> &'static str {
        match self {
            Process::Poisson => "poisson",
            Process::Binomial => "binomial",
        }
    }
}

/// How a cloud was generated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudMeta {
    pub process: Process,
    /// Poisson intensity, or the fixed count for a binomial cloud.
    pub intensity: f64,
    pub seed: RngSeed,
}

/// A random point set in `(0,1)^dim` together with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: PointSet,
    pub meta: CloudMeta,
}

impl PointCloud {
    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "dim,seed,stream,process,intensity,count")?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            self.dim(),
            self.meta.seed.master,
            self.meta.seed.stream,
            self.meta.process.name(),
            self.meta.intensity,
            self.len()
        )?;
        let header: Vec<String> = (1..=self.dim()).map(|k| format!("x{k}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for p in self.points.iter() {
            let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, line)) => Ok((i + 1, line?)),
                None => Err(Error::Parse {
                    line: 0,
                    reason: format!("missing {what}"),
                }),
            }
        };
        let (line, header) = next("header")?;
        if header.trim() != "dim,seed,stream,process,intensity,count" {
            return Err(Error::Parse {
                line,
                reason: "unexpected header".into(),
            });
        }
        let (line, meta) = next("metadata row")?;
        let fields: Vec<&str> = meta.trim().split(',').collect();
        let bad = |reason: &str| Error::Parse {
            line,
            reason: reason.to_string(),
        };
        if fields.len() != 6 {
            return Err(bad("metadata row needs 6 fields"));
        }
        let dim: usize = fields[0].parse().map_err(|_| bad("bad dim"))?;
        let master: u64 = fields[1].parse().map_err(|_| bad("bad seed"))?;
        let stream: u64 = fields[2].parse().map_err(|_| bad("bad stream"))?;
        let process = match fields[3] {
            "poisson" => Process::Poisson,
            "binomial" => Process::Binomial,
            _ => return Err(bad("bad process")),
        };
        let intensity: f64 = fields[4].parse().map_err(|_| bad("bad intensity"))?;
        let count: usize = fields[5].parse().map_err(|_| bad("bad count"))?;
        next("coordinate header")?;
        let mut points = PointSet::new(dim)?;
        for _ in 0..count {
            let (line, row) = next("point row")?;
            let coords: std::result::Result<Vec<f64>, _> = row.trim().split(',').map(str::parse::<f64>).collect();
            let coords = coords.map_err(|e| Error::Parse {
                line,
                reason: e.to_string(),
            })?;
            points.push(&coords).map_err(|_| Error::Parse {
                line,
                reason: "wrong number of coordinates".into(),
            })?;
        }
        Ok(PointCloud {
            points,
            meta: CloudMeta {
                process,
                intensity,
                seed: RngSeed::new(master, stream),
            },
        })
    }
}

/// Axis-aligned box: closed-open on the first `d-1` axes and `(lower, upper]`
/// on the last, so horizontal slabs stacked along the last axis partition the
/// cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    lower: Point,
    upper: Point,
}

impl Region {
    pub fn new(lower: Point, upper: Point) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::InvalidDimension {
                got: upper.dim(),
                reason: "region corners differ in dimension",
            });
        }
        if lower.0.iter().zip(&upper.0).any(|(l, u)| l > u) {
            return Err(Error::InvalidInput("region lower corner exceeds upper corner".into()));
        }
        Ok(Self { lower, upper })
    }

    /// `[0,1)^{d-1} × (bottom, top]`.
    pub fn slab(dim: usize, bottom: f64, top: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                got: 0,
                reason: "dimension must be at least 1",
            });
        }
        let mut lower = vec![0.0; dim];
        let mut upper = vec![1.0; dim];
        lower[dim - 1] = bottom;
        upper[dim - 1] = top;
        Self::new(Point(lower), Point(upper))
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::slab(dim, 0.0, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &Point {
        &self.lower
    }

    pub fn upper(&self) -> &Point {
        &self.upper
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        let d = self.dim();
        debug_assert_eq!(p.len(), d);
        let (lo, hi) = (&self.lower.0, &self.upper.0);
        (0..d - 1).all(|k| lo[k] <= p[k] && p[k] < hi[k]) && lo[d - 1] < p[d - 1] && p[d - 1] <= hi[d - 1]
    }
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            got: 0,
            reason: "dimension must be at least 1",
        });
    }
    let half = d as f64 / 2.0;
    Ok(PI.powf(half) / gamma(1.0 + half))
}

fn fill_uniform<R: Rng>(rng: &mut R, count: usize, dim: usize) -> PointSet {
    let coords = (0..count * dim).map(|_| rng.sample::<f64, _>(Open01)).collect();
    PointSet { dim, coords }
}

/// Redraws the last coordinate of the later point of any tied pair until all
/// last coordinates are distinct.
fn separate_last_coords<R: Rng>(points: &mut PointSet, rng: &mut R) {
    while let Some((_, later)) = points.find_duplicate_last() {
        let idx = (later + 1) * points.dim - 1;
        points.coords[idx] = rng.sample(Open01);
    }
}

/// Homogeneous Poisson process of the given intensity on `(0,1)^dim`.
pub fn sample_poisson_cloud(intensity: f64, dim: usize, seed: impl Into<RngSeed>) -> Result<PointCloud> {
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(Error::param("intensity", intensity, "must be positive and finite"));
    }
    if dim == 0 {
        return Err(Error::InvalidDimension {
            got: 0,
            reason: "dimension must be at least 1",
        });
    }
    let seed = seed.into();
    let mut rng = seed.rng();
    let count = Poisson::new(intensity)
        .map_err(|_| Error::param("intensity", intensity, "rejected by the Poisson sampler"))?
        .sample(&mut rng) as usize;
    let mut points = fill_uniform(&mut rng, count, dim);
    separate_last_coords(&mut points, &mut rng);
    Ok(PointCloud {
        points,
        meta: CloudMeta {
            process: Process::Poisson,
            intensity,
            seed,
        },
    })
}

/// `count` independent uniform points on `(0,1)^dim`.
pub fn sample_binomial_cloud(count: usize, dim: usize, seed: impl Into<RngSeed>) -> Result<PointCloud> {
    if count == 0 {
        return Err(Error::param("count", 0.0, "must be at least 1"));
    }
    if dim == 0 {
        return Err(Error::InvalidDimension {
            got: 0,
            reason: "dimension must be at least 1",
        });
    }
    let seed = seed.into();
    let mut rng = seed.rng();
    let mut points = fill_uniform(&mut rng, count, dim);
    separate_last_coords(&mut points, &mut rng);
    Ok(PointCloud {
        points,
        meta: CloudMeta {
            process: Process::Binomial,
            intensity: count as f64,
            seed,
        },
    })
}

/// Sorts by ascending last coordinate and drops it. The result is the arrival
/// sequence of the coupled on-line graph, together with the sorting
/// permutation (`order[i]` is the original index of output point `i`).
pub fn project_drop_last_with_order(points: &PointSet) -> Result<(PointSet, Vec<usize>)> {
    let d = points.dim();
    if d < 2 {
        return Err(Error::InvalidDimension {
            got: d,
            reason: "projection needs dimension at least 2",
        });
    }
    let order = points.ascending_last_order();
    let mut coords = Vec::with_capacity(order.len() * (d - 1));
    for &i in &order {
        coords.extend_from_slice(&points.get(i)[..d - 1]);
    }
    Ok((PointSet { dim: d - 1, coords }, order))
}

pub fn project_drop_last(points: &PointSet) -> Result<PointSet> {
    project_drop_last_with_order(points).map(|(p, _)| p)
}

pub(crate) fn cmp_f64(a: &f64, b: &f64) -> Ordering {
    a.total_cmp(b)
}
