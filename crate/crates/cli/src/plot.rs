//! Static SVG of the best sector, the lens and the numeric roots.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use sectorcert::oracle::roots_numeric;
use sectorcert::{best_sector, lens_of, LensOutcome, Polynomial, Precision};

const W: f64 = 800.0;
const H: f64 = 600.0;

struct View {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl View {
    fn px(&self, x: f64) -> f64 {
        (x - self.x0) / (self.x1 - self.x0) * W
    }

    fn py(&self, y: f64) -> f64 {
        H - (y - self.y0) / (self.y1 - self.y0) * H
    }

    fn point(&self, x: f64, y: f64) -> String {
        format!("{:.2},{:.2}", self.px(x), self.py(y))
    }
}

pub fn render(f: &Polynomial, prec: Precision, m: Option<&BigInt>) -> String {
    let report = best_sector(f, None, &prec).ok();
    let lens = match lens_of(f, &prec) {
        Ok(LensOutcome::Lens(l)) => Some(l),
        _ => None,
    };
    let roots = roots_numeric(f, 1e-12).map(|r| r.roots).unwrap_or_default();
    let v = report.as_ref().and_then(|r| r.best.vertex.upper.to_f64());
    let theta = report.as_ref().map(|r| r.best.half_angle_f64());
    let tip = lens.as_ref().and_then(|l| l.tip().to_f64());
    let m = m.and_then(|m| m.to_f64());

    let mut xs: Vec<f64> = roots.iter().map(|z| z.re).collect();
    xs.extend([0.0, 1.0]);
    xs.extend(v.map(|v| v + 2.0));
    xs.extend(tip);
    xs.extend(m);
    let ys: Vec<f64> = roots.iter().map(|z| z.im.abs()).collect();
    let (xmin, xmax) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let span = (xmax - xmin).max(1.0);
    let ymax = ys.iter().fold(span * 0.375, |a, &y| a.max(y)) * 1.15;
    let mut view = View { x0: xmin - 0.1 * span, x1: xmax + 0.1 * span, y0: -ymax, y1: ymax };
    // equal scaling on both axes
    let aspect = (view.x1 - view.x0) / (view.y1 - view.y0);
    if aspect < W / H {
        let grow = (view.y1 - view.y0) * W / H - (view.x1 - view.x0);
        view.x0 -= grow / 2.0;
        view.x1 += grow / 2.0;
    } else {
        let grow = (view.x1 - view.x0) * H / W - (view.y1 - view.y0);
        view.y0 -= grow / 2.0;
        view.y1 += grow / 2.0;
    }

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<line x1="0" y1="{y:.2}" x2="{W}" y2="{y:.2}" stroke="#888" stroke-width="1"/>"##,
        y = view.py(0.0)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{x:.2}" y1="0" x2="{x:.2}" y2="{H}" stroke="#888" stroke-width="1"/>"##,
        x = view.px(0.0)
    );
    if let (Some(v), Some(t)) = (v, theta) {
        let reach = 4.0 * (view.x1 - view.x0 + view.y1 - view.y0);
        let mut pts = vec![view.point(v, 0.0)];
        for i in 0..=32 {
            let a = -t + 2.0 * t * i as f64 / 32.0;
            pts.push(view.point(v + reach * a.cos(), reach * a.sin()));
        }
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="#4a90d9" fill-opacity="0.25" stroke="#4a90d9"/>"##,
            pts.join(" ")
        );
    }
    if let (Some(l), Some(tip)) = (&lens, tip) {
        let steps = 200;
        let mut upper = Vec::new();
        for i in 1..steps {
            let x = tip * i as f64 / steps as f64;
            if let Some(y) = l.boundary_f64(x) {
                upper.push((x, y));
            }
        }
        let mut pts = vec![view.point(0.0, 0.0)];
        pts.extend(upper.iter().map(|&(x, y)| view.point(x, y)));
        pts.push(view.point(tip, 0.0));
        pts.extend(upper.iter().rev().map(|&(x, y)| view.point(x, -y)));
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="#e07b39" fill-opacity="0.3" stroke="#e07b39"/>"##,
            pts.join(" ")
        );
    }
    for z in &roots {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#, view.px(z.re), view.py(z.im));
    }
    if let Some(m) = m {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="5" fill="none" stroke="#c0392b" stroke-width="2"/>"##,
            view.px(m),
            view.py(0.0)
        );
    }
    s.push_str("</svg>\n");
    s
}
