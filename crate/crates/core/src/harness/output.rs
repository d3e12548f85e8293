//! Long-format result tables: one row per `(n, statistic)`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::experiments::{CouplingRow, LongestEdgeRow, PhaseReport, WeightRow};
use crate::harness::stats::EmpiricalDistribution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: f64,
    pub statistic: String,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Table {
    pub fn push(&mut self, n: f64, statistic: impl Into<String>, value: f64) {
        self.rows.push(TableRow {
            n,
            statistic: statistic.into(),
            value,
        });
    }

    /// Mean, variance, stderr, count, quartiles and extremes of `dist`, each
    /// statistic name prefixed by `prefix`.
    pub fn push_summary(&mut self, n: f64, prefix: &str, dist: &EmpiricalDistribution) {
        let stats = [
            ("mean", dist.mean),
            ("variance", dist.variance),
            ("stderr", dist.stderr),
            ("count", dist.len() as f64),
            ("min", dist.min()),
            ("q25", dist.quantile(0.25)),
            ("median", dist.quantile(0.5)),
            ("q75", dist.quantile(0.75)),
            ("max", dist.max()),
        ];
        for (name, value) in stats {
            self.push(n, format!("{prefix}{name}"), value);
        }
    }

    pub fn extend(&mut self, other: Table) {
        self.rows.extend(other.rows);
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "n,statistic,value")?;
                for r in &self.rows {
                    writeln!(out, "{},{},{}", r.n, r.statistic, r.value)?;
                }
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.rows).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }

    /// `series,x,y` lines, one series per statistic with `x = n`.
    pub fn write_plot<W: Write>(&self, mut out: W) -> Result<()> {
        let mut names: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !names.contains(&r.statistic.as_str()) {
                names.push(&r.statistic);
            }
        }
        writeln!(out, "series,x,y")?;
        for name in names {
            for r in self.rows.iter().filter(|r| r.statistic == name) {
                writeln!(out, "{},{},{}", name, r.n, r.value)?;
            }
        }
        Ok(())
    }
}

pub fn weight_table(rows: &[WeightRow]) -> Table {
    let mut t = Table::default();
    for r in rows {
        t.push_summary(r.n, &format!("{}_weight_", r.region.name()), &r.weights);
        t.push(r.n, "scale", r.scale);
    }
    t
}

pub fn longest_edge_table(rows: &[LongestEdgeRow]) -> Table {
    let mut t = Table::default();
    for r in rows {
        t.push_summary(r.n, "longest_edge_", &r.lengths);
    }
    t
}

pub fn phase_table(reports: &[PhaseReport]) -> Table {
    let mut t = Table::default();
    for r in reports {
        let p = format!("alpha{}_", r.alpha);
        t.push(r.n, format!("{p}centered_variance"), r.centered.variance);
        if let Some(nd) = &r.normal {
            t.push(r.n, format!("{p}skewness"), nd.skewness);
            t.push(r.n, format!("{p}excess_kurtosis"), nd.excess_kurtosis);
            t.push(r.n, format!("{p}ks_normal"), nd.ks_normal);
        }
        if let Some(k) = r.limit_ks {
            t.push(r.n, format!("{p}ks_limit"), k);
        }
        if let Some(pass) = r.passed {
            t.push(r.n, format!("{p}passed"), f64::from(u8::from(pass)));
        }
    }
    t
}

pub fn coupling_table(rows: &[CouplingRow]) -> Table {
    let mut t = Table::default();
    for r in rows {
        t.push(r.n, "t_n", r.t_n);
        t.push(r.n, "replicates", r.replicates as f64);
        t.push(r.n, "ordering_violations", r.ordering_violations as f64);
        t.push(r.n, "per_edge_violations", r.per_edge_violations as f64);
        t.push(r.n, "mean_abs_difference", r.mean_abs_difference);
        t.push(r.n, "mean_beta", r.mean_beta);
        t.push(r.n, "mean_aggregate_bound", r.mean_aggregate_bound);
        if let Some(x) = r.max_per_edge_excess {
            t.push(r.n, "max_per_edge_excess", x);
        }
    }
    t
}
