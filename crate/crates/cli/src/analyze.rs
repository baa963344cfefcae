use serde_json::{json, Value};

use sectorcert::bounded::rational_string;
use sectorcert::lens::{combined_region, interval_cot, interval_disk_in_lens, interval_effective, AdmissibleInterval};
use sectorcert::{best_sector, lens_of, LensOutcome, Polynomial, Precision, Sector};

fn sector_json(s: &Sector, places: u32) -> Value {
    json!({
        "method": s.method.as_str(),
        "alpha": s.alpha.as_ref().map(rational_string),
        "vertex_lower": s.vertex.lower_decimal(places),
        "vertex_upper": s.vertex.upper_decimal(places),
        "angle": format!("pi/{}", s.angle_denominator()),
    })
}

fn interval_json(i: &AdmissibleInterval, places: u32) -> Value {
    json!({
        "lo": i.lo.upper_decimal(places),
        "hi": i.hi.lower_decimal(places),
        "source": i.source.as_str(),
        "integers": i.integers().map(|(a, b)| [a.to_string(), b.to_string()]),
    })
}

pub fn run(f: &Polynomial, prec: Precision, as_json: bool) -> anyhow::Result<()> {
    let places = prec.decimal_places();
    let shown = 8;
    let report = best_sector(f, None, &prec)?;
    let mut doc = json!({ "polynomial": f.to_string(), "coefficients": f.to_coeff_list(), "degree": f.degree() });

    let mut lines = vec![format!("f = {f}  (degree {})", f.degree())];
    let mut sectors = Vec::new();
    lines.push("sectors:".into());
    for c in &report.candidates {
        let label = match &c.alpha {
            Some(a) => format!("{} (alpha = {})", c.method, rational_string(a)),
            None => c.method.to_string(),
        };
        match &c.outcome {
            Ok(s) => {
                lines.push(format!(
                    "  {label:<28} v in [{}, {}]  angle pi/{}",
                    s.vertex.lower_decimal(shown),
                    s.vertex.upper_decimal(shown),
                    s.angle_denominator()
                ));
                sectors.push(sector_json(s, places));
            }
            Err(e) => {
                lines.push(format!("  {label:<28} n/a: {e}"));
                sectors.push(json!({ "method": c.method.as_str(), "alpha": c.alpha.as_ref().map(rational_string), "error": e }));
            }
        }
    }
    let best = &report.best;
    lines.push(format!("best: {} with v <= {}", best.method, best.vertex.upper_decimal(shown)));
    doc["sectors"] = Value::Array(sectors);
    doc["best"] = sector_json(best, places);

    if let Ok(part) = f.sign_blocks() {
        let mut parts = Vec::new();
        let mut blocks = Vec::new();
        for (j, b) in part.blocks.iter().enumerate() {
            let neg = b.neg.as_ref().map(|n| n.sum.to_string());
            parts.push(format!("S_{}^+ = {}, S_{}^- = {}", j + 1, b.pos_sum, j + 1, neg.as_deref().unwrap_or("-")));
            blocks.push(json!({ "pos_sum": b.pos_sum.to_string(), "neg_sum": neg }));
        }
        lines.push(format!("sign blocks ({} changes): {}", part.sign_changes, parts.join("; ")));
        doc["sign_blocks"] = json!({ "sign_changes": part.sign_changes, "blocks": blocks });
    }

    let lens = match lens_of(f, &prec) {
        Ok(LensOutcome::Lens(l)) => {
            lines.push(format!(
                "lens: v~ = {} (reciprocal via {}), n = {}",
                l.v_tilde.upper_decimal(shown),
                l.reciprocal_sector.method,
                l.n
            ));
            let mut intervals = Vec::new();
            for (name, res) in [
                ("disk in lens", interval_disk_in_lens(&l, &prec)),
                ("cot", interval_cot(&l, &prec)),
                ("effective", interval_effective(&l, &prec)),
            ] {
                match res {
                    Ok(i) => {
                        let ints = match i.integers() {
                            Some((a, b)) => format!("integers {a}..{b}"),
                            None => "no integers".into(),
                        };
                        lines.push(format!(
                            "  {name:<13} ({}, {})  {ints}",
                            i.lo.upper_decimal(shown),
                            i.hi.lower_decimal(shown)
                        ));
                        intervals.push(interval_json(&i, places));
                    }
                    Err(e) => lines.push(format!("  {name:<13} n/a: {e}")),
                }
            }
            doc["lens"] = json!({
                "v_tilde": l.v_tilde.upper_decimal(places),
                "n": l.n,
                "reciprocal": sector_json(&l.reciprocal_sector, places),
                "intervals": intervals,
            });
            Some(l)
        }
        Ok(LensOutcome::HalfPlane(s)) => {
            lines.push(format!("lens: none, the reciprocal has a sector at 0 with angle pi/{}", s.angle_denominator()));
            doc["lens"] = json!({ "half_plane": sector_json(&s, places) });
            None
        }
        Err(e) => {
            lines.push(format!("lens: n/a: {e}"));
            doc["lens"] = Value::Null;
            None
        }
    };

    let region = combined_region(best, lens.as_ref(), &prec);
    let mut desc: Vec<String> = region
        .intervals
        .iter()
        .map(|i| format!("({}, {})", i.lo.upper_decimal(shown), i.hi.lower_decimal(shown)))
        .collect();
    desc.push(format!("({}, inf)", region.ray_lo.upper_decimal(shown)));
    lines.push(format!("admissible m: {}", desc.join(" U ")));
    for note in &region.notes {
        lines.push(format!("  note: {note}"));
    }
    doc["region"] = json!({
        "intervals": region.intervals.iter().map(|i| interval_json(i, places)).collect::<Vec<_>>(),
        "ray_lo": region.ray_lo.upper_decimal(places),
        "notes": region.notes,
    });

    if as_json {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(())
}
