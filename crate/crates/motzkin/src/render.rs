//! ASCII and SVG pictures of B-tile grid tilings.
//!
//! Blank tiles (`A4`) are drawn empty, so a flat walk renders as an empty
//! grid and every other tile marks where the walk's height changes.

use std::fmt::Write;

use motzkin_core::tiles::{Tiling, SOUTH};
use motzkin_core::SiteKind;

const BLANK: &str = "A4";
const CELL: f64 = 40.0;

fn tile_name(til: &Tiling, x: usize, r: usize) -> Option<&'static str> {
    til.get(x, r).map(|t| t.name)
}

fn rows(til: &Tiling) -> usize {
    til.geometry.columns().iter().copied().max().unwrap_or(0)
}

/// Binary height between columns, most significant bit first.
fn height_string(til: &Tiling, x: usize) -> String {
    let bits = if x == 0 {
        til.geometry.west_bits().len()
    } else {
        til.geometry.column_height(x - 1)
    };
    let h = til.height_between(x).unwrap_or(0);
    if bits == 0 {
        return "0".into();
    }
    format!("{h:0bits$b}")
}

fn south_glyphs(til: &Tiling) -> Vec<char> {
    (0..til.geometry.width())
        .map(|x| {
            let v = til
                .get(x, 0)
                .and_then(|t| t.edge(SOUTH).value())
                .unwrap_or(0);
            SiteKind::SpinOne.glyph(v)
        })
        .collect()
}

/// Text grid, top row first. Each cell is `[A1]`, `[  ]` for the blank tile
/// or spaces where the geometry has no cell; below it come the sites and the
/// binary heights between columns.
pub fn render_ascii(til: &Tiling) -> String {
    let width = til.geometry.width();
    let mut out = String::new();
    for r in (0..rows(til)).rev() {
        let _ = write!(out, "{:>3} ", r + 1);
        for x in 0..width {
            match tile_name(til, x, r) {
                Some(BLANK) => out.push_str("[  ]"),
                Some(name) => {
                    let _ = write!(out, "[{name:<2}]");
                }
                None => out.push_str("    "),
            }
        }
        out.push('\n');
    }
    out.push_str("    ");
    for g in south_glyphs(til) {
        let _ = write!(out, " {g}  ");
    }
    out.push('\n');
    out.push_str("  h ");
    let heights: Vec<String> = (0..=width).map(|x| height_string(til, x)).collect();
    out.push_str(&heights.join(" "));
    out.push('\n');
    out
}

/// SVG with one square per cell, the tile name inside non-blank cells, the
/// walk drawn underneath and heights on the column boundaries.
pub fn render_svg(til: &Tiling) -> String {
    let width = til.geometry.width();
    let nrows = rows(til);
    let heights: Vec<u64> = (0..=width)
        .map(|x| til.height_between(x).unwrap_or(0))
        .collect();
    let max_h = heights.iter().copied().max().unwrap_or(0) as f64;
    let walk_h = (max_h + 1.0) * CELL / 2.0;
    let w = width as f64 * CELL + 2.0 * CELL;
    let h = nrows as f64 * CELL + walk_h + 2.0 * CELL;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="monospace" font-size="12">"#
    );
    let grid_bottom = CELL + nrows as f64 * CELL;
    for x in 0..width {
        for r in 0..til.geometry.column_height(x) {
            let cx = CELL + x as f64 * CELL;
            let cy = grid_bottom - (r + 1) as f64 * CELL;
            let _ = writeln!(
                s,
                r##"<rect x="{cx}" y="{cy}" width="{CELL}" height="{CELL}" fill="#{}" stroke="#444"/>"##,
                if tile_name(til, x, r) == Some(BLANK) {
                    "fff"
                } else {
                    "eef"
                }
            );
            if let Some(name) = tile_name(til, x, r).filter(|&n| n != BLANK) {
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" text-anchor="middle">{name}</text>"#,
                    cx + CELL / 2.0,
                    cy + CELL / 2.0 + 4.0
                );
            }
        }
    }
    for x in 0..=width {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
            CELL + x as f64 * CELL,
            CELL - 6.0,
            height_string(til, x)
        );
    }
    let base = grid_bottom + walk_h + CELL / 2.0;
    let points: Vec<String> = heights
        .iter()
        .enumerate()
        .map(|(x, &hv)| {
            format!(
                "{},{}",
                CELL + x as f64 * CELL,
                base - hv as f64 * CELL / 2.0
            )
        })
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#c00" stroke-width="2"/>"##,
        points.join(" ")
    );
    s.push_str("</svg>\n");
    s
}
