//! JSON and DOT renderings of analysis results.
//!
//! Every output is a pure function of its inputs: maps have sorted keys and
//! lists follow node order or height order, so identical runs give
//! byte-identical files.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::descent::{Decomposition, DescentDag, MinimaxPath, RoleKind};
use crate::flooding::{Barcode, CriticalEvent, LevelPersistence, MergedMinimum};
use crate::graph::{Graph, NodeId};
use crate::height::HeightFunction;
use crate::tpt::TptResult;

/// Formats like C's `%.12g`.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{v:.*}", (11 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn labels(g: &Graph, xs: &[NodeId]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x).to_string()).collect()
}

fn events_json(g: &Graph, events: &[CriticalEvent]) -> Value {
    Value::Array(
        events
            .iter()
            .map(|e| {
                json!({
                    "node": g.label(e.node),
                    "step": e.step,
                    "index": e.index,
                    "causes": e.causes,
                    "nondegenerate": e.nondegenerate,
                })
            })
            .collect(),
    )
}

/// Levels, critical sets by index, per-node roles and, when given, the
/// persistence events of every level.
pub fn decomposition_json(g: &Graph, h: &HeightFunction, d: &Decomposition, persistence: Option<&[LevelPersistence]>) -> Value {
    let levels: Vec<Value> = d
        .levels
        .iter()
        .map(|l| {
            json!({
                "index": l.index,
                "size": l.nodes.len(),
                "critical": labels(g, &l.critical),
                "basins": l.basins.iter().map(|b| json!({
                    "critical": g.label(b.critical),
                    "members": labels(g, &b.members),
                })).collect::<Vec<_>>(),
                "boundary": labels(g, &l.boundary),
            })
        })
        .collect();

    let mut nondegenerate = serde_json::Map::new();
    let mut degenerate = serde_json::Map::new();
    let mut roles = Vec::new();
    for &x in h.order() {
        for r in d.roles(x) {
            let map = if r.kind == RoleKind::Nondegenerate { &mut nondegenerate } else { &mut degenerate };
            let entry = map.entry(r.index.to_string()).or_insert_with(|| Value::Array(Vec::new()));
            entry.as_array_mut().expect("array").push(Value::from(g.label(x)));
        }
    }
    for x in 0..g.n() {
        if !d.roles(x).is_empty() {
            roles.push(json!({
                "node": g.label(x),
                "roles": d.roles(x),
            }));
        }
    }
    let mut out = json!({
        "nodes": g.n(),
        "tie_break": h.tie_break().to_string(),
        "levels": levels,
        "critical": nondegenerate,
        "degenerate": degenerate,
        "roles": roles,
    });
    if let Some(lp) = persistence {
        out["persistence"] = Value::Array(
            lp.iter()
                .map(|p| json!({"level": p.level, "events": events_json(g, &p.events)}))
                .collect(),
        );
    }
    out
}

/// Barcode intervals with node labels, plus events and denoising output.
pub fn barcode_json(g: &Graph, b: &Barcode, events: &[CriticalEvent], merged: Option<&[MergedMinimum]>) -> Value {
    let intervals: Vec<Value> = b
        .intervals
        .iter()
        .map(|i| {
            json!({
                "dim": i.dim,
                "birth": i.birth,
                "death": i.death,
                "birth_node": g.label(i.birth_node),
                "killer_node": i.killer.map(|k| g.label(k)),
                "birth_h": i.birth_h,
                "death_h": i.death_h,
            })
        })
        .collect();
    let mut out = json!({
        "level": b.level,
        "steps": b.steps,
        "intervals": intervals,
        "betti0": b.betti_curve(0),
        "betti1": b.betti_curve(1),
        "events": events_json(g, events),
    });
    if !b.essential_dim2.is_empty() {
        out["essential_dim2"] = json!(b.essential_dim2);
    }
    if let Some(m) = merged {
        out["denoised"] = Value::Array(
            m.iter()
                .map(|m| {
                    json!({
                        "minimum": g.label(m.minimum),
                        "saddle": g.label(m.saddle),
                        "persistence": m.persistence,
                    })
                })
                .collect(),
        );
    }
    out
}

pub fn path_json(g: &Graph, h: &HeightFunction, p: &MinimaxPath) -> Value {
    json!({
        "source": g.label(p.path[0]),
        "target": g.label(*p.path.last().expect("nonempty path")),
        "path": labels(g, &p.path),
        "bottleneck": g.label(p.bottleneck),
        "bottleneck_height": h.value(p.bottleneck),
        "bottleneck_energy": h.base_values()[p.bottleneck],
    })
}

/// Committor, rates, proportions, the `top_k` interior nodes by partial
/// current and every effective current above the arrow threshold.
pub fn tpt_json(g: &Graph, r: &TptResult, top_k: usize) -> Value {
    let top: Vec<Value> = r
        .ranked_interior()
        .into_iter()
        .take(top_k)
        .map(|x| {
            json!({
                "node": g.label(x),
                "partial_current": r.partial_current[x],
                "partial_current_unthresholded": r.partial_current_all[x],
                "transition_current": r.transition_current[x],
                "committor": r.committor[x],
            })
        })
        .collect();
    let mut arrows: Vec<_> = r.effective_current.iter().filter(|c| c.value > r.arrow_threshold).collect();
    arrows.sort_by(|a, b| b.value.total_cmp(&a.value).then((a.from, a.to).cmp(&(b.from, b.to))));
    let side = |t: bool| -> Vec<String> { (0..g.n()).filter(|&x| r.target_side[x] == t).map(|x| g.label(x).to_string()).collect() };
    json!({
        "source": labels(g, &r.source),
        "target": labels(g, &r.target),
        "convention": r.convention,
        "nodes": g.labels(),
        "committor": r.committor,
        "backward_committor": r.backward_committor,
        "reactive_distribution": r.reactive_distribution,
        "rate": {
            "from_source": r.rate_from_source,
            "into_target": r.rate_into_target,
            "mean": r.rate(),
        },
        "proportions": {"rho_a": r.rho_a, "rho_b": r.rho_b},
        "communities": {"source_side": side(false), "target_side": side(true)},
        "top_nodes": top,
        "arrow_threshold": r.arrow_threshold,
        "effective_current": arrows.iter().map(|c| json!({
            "from": g.label(c.from),
            "to": g.label(c.to),
            "value": c.value,
        })).collect::<Vec<_>>(),
    })
}

/// 64-bit FNV-1a.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Pastel fill color derived from a label hash.
pub fn label_color(label: &str) -> String {
    let hash = fnv1a(label);
    let hue = (hash % 360) as f64;
    let (s, v) = (0.45, 0.95);
    let c = v * s;
    let hp = hue / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let to = |u: f64| ((u + m) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", to(r), to(g), to(b))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

/// Gradient-flow digraph. Nodes are filled by the critical node of the
/// basin that absorbs them; index-0 critical nodes are ovals, higher ones
/// diamonds (dashed when only persistence sees them).
pub fn decomposition_dot(g: &Graph, h: &HeightFunction, d: &Decomposition) -> String {
    let mut s = String::from("digraph landscape {\n  node [style=filled, shape=circle];\n");
    for &x in h.order() {
        let color = d
            .basin_of(x)
            .map_or_else(|| "#ffffff".to_string(), |(_, c)| label_color(g.label(c)));
        let roles = d.roles(x);
        let top = roles.iter().map(|r| r.index).max();
        let shape = match top {
            Some(0) => "ellipse",
            Some(_) => "diamond",
            None => "circle",
        };
        let only_persistence = !roles.is_empty() && roles.iter().all(|r| r.kind != RoleKind::Nondegenerate);
        let style = if only_persistence { ", style=\"filled,dashed\"" } else { "" };
        let _ = writeln!(s, "  {} [fillcolor=\"{color}\", shape={shape}{style}];", quote(g.label(x)));
    }
    let dag = DescentDag::new(g, h).expect("decomposed graph is valid");
    let mut arcs: Vec<(NodeId, NodeId)> = dag.arcs().collect();
    arcs.sort_by_key(|&(x, y)| (h.rank(x), h.rank(y)));
    for (x, y) in arcs {
        let _ = writeln!(s, "  {} -> {};", quote(g.label(x)), quote(g.label(y)));
    }
    s.push_str("}\n");
    s
}

/// Graph edges in grey with effective-current arrows above the threshold,
/// widths proportional to the current.
pub fn tpt_dot(g: &Graph, r: &TptResult) -> String {
    let mut s = String::from("digraph transitions {\n  node [style=filled, shape=circle];\n");
    for x in 0..g.n() {
        let fill = if r.source.contains(&x) {
            "#7fa7e0"
        } else if r.target.contains(&x) {
            "#e08a7f"
        } else if r.target_side[x] {
            "#f6d5d0"
        } else {
            "#d5e2f6"
        };
        let _ = writeln!(s, "  {} [fillcolor=\"{fill}\"];", quote(g.label(x)));
    }
    for e in g.edges() {
        let _ = writeln!(
            s,
            "  {} -> {} [dir=none, color=\"#c0c0c0\"];",
            quote(g.label(e.u)),
            quote(g.label(e.v))
        );
    }
    let arrows: Vec<_> = r.effective_current.iter().filter(|c| c.value > r.arrow_threshold).collect();
    let max = arrows.iter().map(|c| c.value).fold(0.0, f64::max);
    for c in arrows {
        let _ = writeln!(
            s,
            "  {} -> {} [penwidth={}, color=\"#303030\"];",
            quote(g.label(c.from)),
            quote(g.label(c.to)),
            format_real(1.0 + 7.0 * c.value / max)
        );
    }
    s.push_str("}\n");
    s
}
