//! CSV and SVG emission.

use std::fmt::Write as _;
use std::io;

use csrkn::integrator::Trajectory;

/// Error columns of a trajectory, in output order.
pub fn error_columns(traj: &Trajectory) -> Vec<(String, &[f64])> {
    let mut cols: Vec<(String, &[f64])> =
        traj.invariants.iter().map(|s| (format!("{}_err", s.name), s.errors.as_slice())).collect();
    if let Some(sol) = &traj.solution_errors {
        cols.push(("sol_err".into(), sol.as_slice()));
    }
    cols
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `t,<invariant>_err...,[sol_err,]q1..qd,p1..pd`, one row per state.
pub fn write_trajectory_csv<W: io::Write>(out: W, traj: &Trajectory) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dim = traj.states[0].q.len();
    let cols = error_columns(traj);
    let mut header = vec!["t".to_string()];
    header.extend(cols.iter().map(|(n, _)| n.clone()));
    header.extend((1..=dim).map(|i| format!("q{i}")));
    header.extend((1..=dim).map(|i| format!("p{i}")));
    w.write_record(&header)?;
    for (n, s) in traj.states.iter().enumerate() {
        let mut row = vec![num(s.t)];
        row.extend(cols.iter().map(|(_, v)| num(v[n])));
        row.extend(s.q.iter().chain(&s.p).map(|&x| num(x)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_convergence_csv<W: io::Write>(out: W, hs: &[f64], errors: &[f64]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["h", "error"])?;
    for (h, e) in hs.iter().zip(errors) {
        w.write_record([num(*h), num(*e)])?;
    }
    w.flush()?;
    Ok(())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const MAX_POINTS: usize = 2000;
/// Exact zeros are drawn at this level.
const FLOOR: f64 = 1e-18;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Line plot of `log₁₀` of each error series against `t`.
pub fn trajectory_svg(title: &str, traj: &Trajectory) -> String {
    let ts: Vec<f64> = traj.states.iter().map(|s| s.t).collect();
    let cols = error_columns(traj);
    let logs: Vec<Vec<f64>> = cols.iter().map(|(_, v)| v.iter().map(|e| e.max(FLOOR).log10()).collect()).collect();

    let (t0, t1) = (ts[0].min(*ts.last().unwrap()), ts[0].max(*ts.last().unwrap()));
    let lo = logs.iter().flatten().copied().fold(f64::INFINITY, f64::min).floor();
    let hi = logs.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, lo + 1.0) };
    let t_span = if t1 > t0 { t1 - t0 } else { 1.0 };
    let x = |t: f64| MARGIN + (t - t0) / t_span * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let step = ((hi - lo) / 8.0).ceil().max(1.0);
    let mut tick = lo;
    while tick <= hi {
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{}</text>"#, MARGIN - 6.0, y(tick) + 4.0, tick as i64);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN}" x2="{}" y1="{:.1}" y2="{:.1}" stroke="#ddd"/>"##,
            WIDTH - MARGIN,
            y(tick),
            y(tick)
        );
        tick += step;
    }
    for t in [t0, t0 + t_span / 2.0, t0 + t_span] {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{t}</text>"#, x(t), HEIGHT - MARGIN + 18.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">t</text>"#, WIDTH / 2.0, HEIGHT - 12.0);

    let stride = ts.len().div_ceil(MAX_POINTS).max(1);
    for (i, ((name, _), series)) in cols.iter().zip(&logs).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> =
            ts.iter().zip(series).step_by(stride).map(|(&t, &v)| format!("{:.1},{:.1}", x(t), y(v))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#, points.join(" "));
        let ly = MARGIN + 16.0 * (i as f64 + 1.0);
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{color}">{}</text>"#, WIDTH - MARGIN - 70.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use csrkn::integrator::{integrate, GaussLegendreRk, SolverConfig};
    use csrkn::problems::kepler;

    fn short_run() -> Trajectory {
        integrate(&GaussLegendreRk::new(1).unwrap(), &kepler(), 0.1, 20, &SolverConfig::default(), true).unwrap()
    }

    #[test]
    fn csv_header_for_kepler() {
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &short_run()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,H_err,I_err,L_err,sol_err,q1,q2,p1,p2");
        assert_eq!(text.lines().count(), 22);
    }

    #[test]
    fn svg_has_one_polyline_per_error_series() {
        let svg = trajectory_svg("GLRK2 <kepler>", &short_run());
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert!(svg.contains("GLRK2 &lt;kepler&gt;"));
    }
}
