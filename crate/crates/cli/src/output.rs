//! Profile CSV and silhouette SVG.

use std::fmt::Write as _;
use std::io;

use minres_core::{BodySolution, Profile, Segment};

pub const CSV_HEADER: [&str; 5] = ["t", "x_front", "x_rear", "u_front", "u_rear"];

/// What is exactly known about a profile at one radius: the height, unless
/// `t` lies strictly inside a sampled arc, and the slope, unless `t` is a kink.
fn node_value(profile: &Profile, t: f64) -> (Option<f64>, Option<f64>) {
    let mut x_start = 0.0;
    let mut x = None;
    let mut slopes: Vec<f64> = Vec::new();
    for seg in &profile.segments {
        let (a, b) = (seg.t_from(), seg.t_to());
        if a <= t && t <= b {
            match seg {
                Segment::Flat { .. } => {
                    x.get_or_insert(x_start);
                    slopes.push(0.0);
                }
                Segment::Linear { slope, .. } => {
                    x.get_or_insert(x_start + slope * (t - a));
                    slopes.push(*slope);
                }
                Segment::ParamArc { samples } => {
                    if let Some(s) = samples.iter().find(|s| s.t == t) {
                        x.get_or_insert(s.x);
                        slopes.push(s.u);
                    }
                }
            }
        }
        x_start = match seg {
            Segment::Flat { .. } => x_start,
            Segment::Linear { t_from, t_to, slope } => x_start + slope * (t_to - t_from),
            Segment::ParamArc { samples } => samples[samples.len() - 1].x,
        };
    }
    let u = match slopes.split_first() {
        Some((first, rest)) if rest.iter().all(|s| s == first) => Some(*first),
        _ => None,
    };
    (x, u)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Rows at every radius where either profile is known exactly.
pub fn write_profile_csv<W: io::Write>(sol: &BodySolution, out: W) -> csv::Result<()> {
    let mut ts: Vec<f64> = sol
        .front
        .exact_nodes()
        .iter()
        .chain(sol.rear.exact_nodes().iter())
        .map(|n| n.t)
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for t in ts {
        let (xf, uf) = node_value(&sol.front, t);
        let (xr, ur) = node_value(&sol.rear, t);
        w.write_record([format!("{t}"), cell(xf), cell(xr), cell(uf), cell(ur)])?;
    }
    w.flush()?;
    Ok(())
}

/// Front and rear polylines through the rows of a profile CSV that carry
/// a height. A branch with no heights is flat.
pub fn read_profile_csv<R: io::Read>(input: R) -> Result<(Profile, Profile), String> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| format!("profile CSV lacks column `{name}`"))
    };
    let (ct, cf, cr) = (col("t")?, col("x_front")?, col("x_rear")?);
    let mut front = Vec::new();
    let mut rear = Vec::new();
    let mut radius: f64 = 0.0;
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num = |i: usize| -> Result<Option<f64>, String> {
            let s = rec.get(i).unwrap_or("").trim();
            if s.is_empty() {
                return Ok(None);
            }
            s.parse::<f64>()
                .map(Some)
                .map_err(|e| format!("row {}: `{s}`: {e}", line + 2))
        };
        let t = num(ct)?.ok_or_else(|| format!("row {}: missing t", line + 2))?;
        radius = radius.max(t);
        if let Some(x) = num(cf)? {
            front.push((t, x));
        }
        if let Some(x) = num(cr)? {
            rear.push((t, x));
        }
    }
    if radius <= 0.0 {
        return Err("profile CSV has no positive radius".into());
    }
    let build = |mut nodes: Vec<(f64, f64)>| -> Result<Profile, String> {
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        nodes.dedup_by(|b, a| b.0 == a.0);
        if nodes.len() < 2 {
            return Ok(Profile::flat(radius));
        }
        if nodes[0] != (0.0, 0.0) {
            return Err(format!("profile must start at (0, 0), found {:?}", nodes[0]));
        }
        if nodes.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err("profile heights must be nondecreasing in t".into());
        }
        Ok(Profile::polyline(&nodes))
    };
    Ok((build(front)?, build(rear)?))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;

/// Silhouette of the body: the axis is vertical, the front (facing the flux)
/// is on top, measured down from `H`, the rear rises from `0`; both are
/// mirrored to negative radii.
pub fn render_svg(sol: &BodySolution, version: &str) -> String {
    let radius = sol.spec.radius;
    let height = sol.spec.height;
    let span_z = height.max(0.05 * radius);
    let scale = ((WIDTH - 2.0 * MARGIN) / (2.0 * radius)).min((HEIGHT - 2.0 * MARGIN) / span_z);
    let cx = WIDTH / 2.0;
    let base = HEIGHT / 2.0 + 0.5 * span_z * scale;
    let px = |t: f64| cx + t * scale;
    let pz = |z: f64| base - z * scale;

    let front: Vec<(f64, f64)> = sol.front.exact_nodes().iter().map(|n| (n.t, height - n.x)).collect();
    let rear: Vec<(f64, f64)> = sol.rear.exact_nodes().iter().map(|n| (n.t, n.x)).collect();

    // closed outline: front from -T to T, then rear back from T to -T
    let mut pts: Vec<(f64, f64)> = Vec::new();
    pts.extend(front.iter().rev().map(|&(t, z)| (-t, z)));
    pts.extend(front.iter().copied());
    pts.extend(rear.iter().rev().copied());
    pts.extend(rear.iter().map(|&(t, z)| (-t, z)));
    pts.dedup();
    let mut path = String::new();
    for (i, (t, z)) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(path, "{cmd}{:.3},{:.3} ", px(*t), pz(*z));
    }
    path.push('Z');

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#
    );
    let _ = writeln!(s, "<!-- minres {version} -->");
    let _ = writeln!(s, r#"<rect width="800" height="600" fill="white"/>"#);
    // axes: radial at z = 0 and the symmetry axis
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1"/>"#,
        MARGIN / 2.0,
        pz(0.0),
        WIDTH - MARGIN / 2.0,
        pz(0.0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{cx:.3}" y1="{:.3}" x2="{cx:.3}" y2="{:.3}" stroke="black" stroke-width="1" stroke-dasharray="4 3"/>"#,
        HEIGHT - MARGIN / 2.0,
        MARGIN / 2.0
    );
    for (t, label) in [(-radius, format!("-{radius}")), (0.0, "0".to_string()), (radius, format!("{radius}"))] {
        let _ = writeln!(
            s,
            r#"<line x1="{x:.3}" y1="{y0:.3}" x2="{x:.3}" y2="{y1:.3}" stroke="black"/><text x="{x:.3}" y="{ty:.3}" font-family="sans-serif" font-size="12" text-anchor="middle">{label}</text>"#,
            x = px(t),
            y0 = pz(0.0) - 4.0,
            y1 = pz(0.0) + 4.0,
            ty = pz(0.0) + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">H = {height}</text>"#,
        cx + 6.0,
        pz(height) - 6.0
    );
    let _ = writeln!(
        s,
        r##"<path d="{path}" fill="#c8d8e8" stroke="#1f3a5f" stroke-width="2"/>"##
    );
    let _ = writeln!(
        s,
        r#"<text x="400" y="30" font-family="sans-serif" font-size="18" text-anchor="middle">{} (d = {}, T = {radius}, H = {height})</text>"#,
        sol.case_label, sol.spec.dim
    );
    let _ = writeln!(
        s,
        r#"<text x="400" y="52" font-family="sans-serif" font-size="13" text-anchor="middle">R = {:.6}  (front {:.6}, rear {:.6})</text>"#,
        sol.r_total, sol.r_plus, sol.r_minus
    );
    s.push_str("</svg>\n");
    s
}
