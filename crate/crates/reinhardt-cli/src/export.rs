//! CSV, JSON and SVG writers.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use reinhardt_core::dynamics::{angular_momentum, Trajectory};
use reinhardt_core::extremals::MultiCurveSample;
use reinhardt_core::fuller::{angular_momentum_c, hamiltonian_c, FullerState};
use reinhardt_core::halfplane::phi_inv;
use serde::Serialize;

pub const TRAJECTORY_HEADER: &str =
    "time,g11,g12,g21,g22,Xa,Xb,Xc,L1a,L1b,L1c,LRa,LRb,LRc,u0,u1,u2,H,angmom,cost";

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TrajectoryRow {
    pub time: f64,
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
    #[serde(rename = "Xa")]
    pub xa: f64,
    #[serde(rename = "Xb")]
    pub xb: f64,
    #[serde(rename = "Xc")]
    pub xc: f64,
    #[serde(rename = "L1a")]
    pub l1a: f64,
    #[serde(rename = "L1b")]
    pub l1b: f64,
    #[serde(rename = "L1c")]
    pub l1c: f64,
    #[serde(rename = "LRa")]
    pub lra: f64,
    #[serde(rename = "LRb")]
    pub lrb: f64,
    #[serde(rename = "LRc")]
    pub lrc: f64,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub angmom: f64,
    pub cost: f64,
}

pub fn trajectory_rows(traj: &Trajectory) -> Vec<TrajectoryRow> {
    (0..traj.len())
        .map(|i| {
            let s = &traj.states[i];
            let g = s.g.to_array();
            let c = &traj.controls[i];
            TrajectoryRow {
                time: traj.times[i],
                g11: g[0][0],
                g12: g[0][1],
                g21: g[1][0],
                g22: g[1][1],
                xa: s.x.a,
                xb: s.x.b,
                xc: s.x.c,
                l1a: s.l1.a,
                l1b: s.l1.b,
                l1c: s.l1.c,
                lra: s.lr.a,
                lrb: s.lr.b,
                lrc: s.lr.c,
                u0: c.u.u0,
                u1: c.u.u1,
                u2: c.u.u2,
                h: c.hamiltonian,
                angmom: angular_momentum(s),
                cost: traj.costs[i],
            }
        })
        .collect()
}

fn write_csv<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

fn write_json<W: Write, T: Serialize>(mut w: W, rows: &[T]) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, rows)?;
    writeln!(w)?;
    Ok(())
}

pub fn trajectory_csv<W: Write>(w: W, traj: &Trajectory) -> Result<()> {
    write_csv(w, &trajectory_rows(traj))
}

pub fn trajectory_json<W: Write>(w: W, traj: &Trajectory) -> Result<()> {
    write_json(w, &trajectory_rows(traj))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MultiCurveRow {
    pub t: f64,
    pub s0x: f64,
    pub s0y: f64,
    pub s1x: f64,
    pub s1y: f64,
    pub s2x: f64,
    pub s2y: f64,
    pub s3x: f64,
    pub s3y: f64,
    pub s4x: f64,
    pub s4y: f64,
    pub s5x: f64,
    pub s5y: f64,
}

impl From<&MultiCurveSample> for MultiCurveRow {
    fn from(m: &MultiCurveSample) -> Self {
        let p = &m.points;
        MultiCurveRow {
            t: m.t,
            s0x: p[0][0],
            s0y: p[0][1],
            s1x: p[1][0],
            s1y: p[1][1],
            s2x: p[2][0],
            s2y: p[2][1],
            s3x: p[3][0],
            s3y: p[3][1],
            s4x: p[4][0],
            s4y: p[4][1],
            s5x: p[5][0],
            s5y: p[5][1],
        }
    }
}

pub fn multicurve_csv<W: Write>(w: W, samples: &[MultiCurveSample]) -> Result<()> {
    write_csv(
        w,
        &samples.iter().map(MultiCurveRow::from).collect::<Vec<_>>(),
    )
}

pub fn multicurve_json<W: Write>(w: W, samples: &[MultiCurveSample]) -> Result<()> {
    write_json(
        w,
        &samples.iter().map(MultiCurveRow::from).collect::<Vec<_>>(),
    )
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FullerRow {
    pub t: f64,
    pub z1_re: f64,
    pub z1_im: f64,
    pub z2_re: f64,
    pub z2_im: f64,
    pub z3_re: f64,
    pub z3_im: f64,
    #[serde(rename = "H_c")]
    pub h_c: f64,
    #[serde(rename = "A_c")]
    pub a_c: f64,
}

pub fn fuller_rows(path: &[(f64, FullerState)]) -> Vec<FullerRow> {
    path.iter()
        .map(|(t, f)| FullerRow {
            t: *t,
            z1_re: f.z[0].re,
            z1_im: f.z[0].im,
            z2_re: f.z[1].re,
            z2_im: f.z[1].im,
            z3_re: f.z[2].re,
            z3_im: f.z[2].im,
            h_c: hamiltonian_c(&f.z),
            a_c: angular_momentum_c(&f.z),
        })
        .collect()
}

pub fn fuller_csv<W: Write>(w: W, path: &[(f64, FullerState)]) -> Result<()> {
    write_csv(w, &fuller_rows(path))
}

pub fn fuller_json<W: Write>(w: W, path: &[(f64, FullerState)]) -> Result<()> {
    write_json(w, &fuller_rows(path))
}

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Maps data coordinates in `[x0, x1] x [y0, y1]` onto a `w x h` canvas.
struct Viewport {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    w: f64,
    h: f64,
}

impl Viewport {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.x0) / (self.x1 - self.x0) * self.w,
            (self.y1 - y) / (self.y1 - self.y0) * self.h,
        )
    }

    fn polyline(&self, pts: &[[f64; 2]], color: &str, width: f64, closed: bool) -> String {
        let mut d = String::new();
        for p in pts {
            let (x, y) = self.map(p[0], p[1]);
            let _ = write!(d, "{x:.3},{y:.3} ");
        }
        let tag = if closed { "polygon" } else { "polyline" };
        format!(
            "  <{tag} fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\" points=\"{}\"/>\n",
            d.trim_end()
        )
    }

    fn open(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            w = self.w,
            h = self.h
        )
    }
}

/// Half-plane view `[-1, 1] x [0, 2.5]` with the star domain boundary.
pub fn halfplane_svg<W: Write>(mut w: W, paths: &[Vec<[f64; 2]>]) -> Result<()> {
    let vp = Viewport {
        x0: -1.0,
        x1: 1.0,
        y0: 0.0,
        y1: 2.5,
        w: 480.0,
        h: 600.0,
    };
    let mut s = vp.open();
    let r = 1.0 / 3f64.sqrt();
    let arc: Vec<[f64; 2]> = (0..=180)
        .map(|i| {
            let th = std::f64::consts::PI * i as f64 / 180.0;
            [r * th.cos(), r * th.sin()]
        })
        .collect();
    s += &vp.polyline(&arc, "#888888", 1.0, false);
    s += &vp.polyline(&[[-r, 0.0], [-r, 2.5]], "#888888", 1.0, false);
    s += &vp.polyline(&[[r, 0.0], [r, 2.5]], "#888888", 1.0, false);
    s += &vp.polyline(&[[-1.0, 0.0], [1.0, 0.0]], "#000000", 1.0, false);
    for (i, p) in paths.iter().enumerate() {
        s += &vp.polyline(p, COLORS[i % COLORS.len()], 1.5, false);
    }
    s += "</svg>\n";
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// Packing-plane view `[-1.6, 1.6]^2` with the unit circle for reference.
pub fn plane_svg<W: Write>(mut w: W, curves: &[Vec<[f64; 2]>], closed: bool) -> Result<()> {
    let vp = Viewport {
        x0: -1.6,
        x1: 1.6,
        y0: -1.6,
        y1: 1.6,
        w: 560.0,
        h: 560.0,
    };
    let mut s = vp.open();
    let circle: Vec<[f64; 2]> = (0..360)
        .map(|i| {
            reinhardt_core::extremals::circle_point(
                1.0,
                2.0 * std::f64::consts::PI * i as f64 / 360.0,
            )
        })
        .collect();
    s += &vp.polyline(&circle, "#bbbbbb", 1.0, true);
    for (i, c) in curves.iter().enumerate() {
        s += &vp.polyline(c, COLORS[i % COLORS.len()], 1.5, closed);
    }
    s += "</svg>\n";
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// Complex-plane view scaled to the largest modulus among the curves.
pub fn complex_svg<W: Write>(mut w: W, curves: &[Vec<[f64; 2]>]) -> Result<()> {
    let m = curves
        .iter()
        .flatten()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0f64, f64::max)
        .max(1e-300)
        * 1.05;
    let vp = Viewport {
        x0: -m,
        x1: m,
        y0: -m,
        y1: m,
        w: 560.0,
        h: 560.0,
    };
    let mut s = vp.open();
    s += &vp.polyline(&[[-m, 0.0], [m, 0.0]], "#cccccc", 1.0, false);
    s += &vp.polyline(&[[0.0, -m], [0.0, m]], "#cccccc", 1.0, false);
    for (i, c) in curves.iter().enumerate() {
        s += &vp.polyline(c, COLORS[i % COLORS.len()], 1.2, false);
    }
    s += "</svg>\n";
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// Half-plane image `phi^-1(X(t))` of a trajectory.
pub fn halfplane_path(traj: &Trajectory) -> Vec<[f64; 2]> {
    traj.states
        .iter()
        .filter_map(|s| phi_inv(&s.x).ok())
        .map(|z| [z.x, z.y])
        .collect()
}
