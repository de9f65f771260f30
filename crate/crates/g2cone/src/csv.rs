//! Trajectory and sweep tables.

use std::io::{self, Write};

use g2cone_core::shoot::{Sample, Trajectory};

use crate::numfmt::{cell, fmt17};

pub const TRAJECTORY_HEADER: &str = "t,u,A1,A2,B1,B2,alpha1,alpha2,alpha3,alpha4,f,F,F1,F2,F3,F4,F5,G1,G2,beta";

fn row(s: &Sample) -> String {
    let mut cells: Vec<String> = Vec::with_capacity(20);
    cells.push(fmt17(s.t));
    cells.push(fmt17(s.u));
    cells.extend(s.shape.to_array().iter().map(|v| fmt17(*v)));
    cells.extend(s.sphere.alpha.iter().map(|v| fmt17(*v)));
    cells.push(fmt17(s.f));
    cells.extend(s.monitors.to_array().iter().map(|v| cell(*v)));
    cells.join(",")
}

/// One row per sample, LF line endings, empty cells for missing monitors.
pub fn write_trajectory<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for s in &traj.samples {
        writeln!(w, "{}", row(s))?;
    }
    w.flush()
}

/// Generic table of optional numbers with a header line.
pub fn write_table<W: Write>(mut w: W, header: &[&str], rows: &[Vec<Option<f64>>]) -> io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| cell(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}
