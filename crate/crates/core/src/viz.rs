//! Planar layout of F_2^m and renderers for Sidon sets.
//!
//! The layout is built by repeatedly prepending a coordinate: going to an even
//! dimension stacks two copies vertically, going to an odd one places them
//! side by side. Unrolled, bit b_i of a vector (b_1 the most significant) is
//! a column bit when i = m (mod 2) and a row bit otherwise.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sidon::{ExcludeDistribution, PointSet};

/// Largest ambient dimension the renderers accept (128 x 128 grid).
pub const MAX_RENDER_DIM: u32 = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridLayout {
    pub n: u32,
    pub rows: usize,
    pub cols: usize,
}

impl GridLayout {
    pub fn new(n: u32) -> Self {
        GridLayout {
            n,
            rows: 1 << (n / 2),
            cols: 1 << n.div_ceil(2),
        }
    }

    pub fn position(&self, v: u32) -> (usize, usize) {
        layout_index(self.n, v)
    }

    /// Inverse of [`GridLayout::position`].
    pub fn vector_at(&self, row: usize, col: usize) -> u32 {
        let (mut r, mut c) = (row, col);
        let mut v = 0u32;
        // walk from b_n (least significant) up to b_1
        for i in (1..=self.n).rev() {
            let bit = if (i + self.n).is_multiple_of(2) {
                let b = c & 1;
                c >>= 1;
                b
            } else {
                let b = r & 1;
                r >>= 1;
                b
            };
            v |= (bit as u32) << (self.n - i);
        }
        v
    }
}

/// (row, col) of `v` in the layout of F_2^n.
pub fn layout_index(n: u32, v: u32) -> (usize, usize) {
    debug_assert!(n == 32 || v >> n == 0);
    let (mut row, mut col) = (0usize, 0usize);
    for i in 1..=n {
        let bit = ((v >> (n - i)) & 1) as usize;
        if (i + n).is_multiple_of(2) {
            col = (col << 1) | bit;
        } else {
            row = (row << 1) | bit;
        }
    }
    (row, col)
}

struct Style {
    background: &'static str,
    grid: &'static str,
    diamond: &'static str,
    diamond_stroke: &'static str,
    label: &'static str,
    font: &'static str,
}

const STYLE: Style = Style {
    background: "#ffffff",
    grid: "#9e9e9e",
    diamond: "#2e9e44",
    diamond_stroke: "#1b5e20",
    label: "#202020",
    font: "monospace",
};

fn check_inputs(set: &PointSet, dist: Option<&ExcludeDistribution>) -> Result<()> {
    if set.m() > MAX_RENDER_DIM {
        return Err(Error::Capability(format!(
            "rendering supports dimension <= {MAX_RENDER_DIM}, got {}",
            set.m()
        )));
    }
    if let Some(d) = dist {
        if d.set() != set {
            return Err(Error::validation(
                "distribution belongs to a different set",
            ));
        }
    }
    Ok(())
}

enum Cell {
    Member,
    Mult(u32),
    Blank,
}

fn cell(set: &PointSet, dist: Option<&ExcludeDistribution>, v: u32) -> Cell {
    if set.contains(v) {
        return Cell::Member;
    }
    match dist.and_then(|d| d.get(v)) {
        Some(k) if k > 0 => Cell::Mult(k),
        _ => Cell::Blank,
    }
}

/// Fixed-width text grid: `#` for points of S, multiplicities elsewhere,
/// `.` for zero (or when no distribution is given).
pub fn render_text(set: &PointSet, dist: Option<&ExcludeDistribution>) -> Result<String> {
    check_inputs(set, dist)?;
    let layout = GridLayout::new(set.m());
    let width = dist
        .map(|d| d.e_max().to_string().len())
        .unwrap_or(1)
        .max(1);
    let mut out = String::new();
    for row in 0..layout.rows {
        for col in 0..layout.cols {
            if col > 0 {
                out.push(' ');
            }
            let text = match cell(set, dist, layout.vector_at(row, col)) {
                Cell::Member => "#".to_string(),
                Cell::Mult(k) => k.to_string(),
                Cell::Blank => ".".to_string(),
            };
            let _ = write!(out, "{text:>width$}");
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct SvgOptions {
    pub cell_size: u32,
    pub labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            cell_size: 24,
            labels: true,
        }
    }
}

/// SVG 1.1 document: one `<rect>` per cell, a diamond per point of S and a
/// centred label per positive multiplicity. Output depends only on the input.
pub fn render_svg(
    set: &PointSet,
    dist: Option<&ExcludeDistribution>,
    opts: SvgOptions,
) -> Result<String> {
    check_inputs(set, dist)?;
    if opts.cell_size < 4 {
        return Err(Error::validation("cell size must be at least 4"));
    }
    let layout = GridLayout::new(set.m());
    let s = opts.cell_size as usize;
    let (w, h) = (layout.cols * s, layout.rows * s);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let font_size = s * 11 / 24;
    let mut cells = String::new();
    let mut marks = String::new();
    for row in 0..layout.rows {
        for col in 0..layout.cols {
            let (x, y) = (col * s, row * s);
            let _ = writeln!(
                cells,
                r#"<rect x="{x}" y="{y}" width="{s}" height="{s}" fill="{}" stroke="{}" stroke-width="1"/>"#,
                STYLE.background, STYLE.grid
            );
            let (cx, cy) = (x as f64 + s as f64 / 2.0, y as f64 + s as f64 / 2.0);
            let r = s as f64 * 0.4;
            match cell(set, dist, layout.vector_at(row, col)) {
                Cell::Member => {
                    let _ = writeln!(
                        marks,
                        r#"<polygon points="{cx},{} {},{cy} {cx},{} {},{cy}" fill="{}" stroke="{}" stroke-width="1"/>"#,
                        cy - r,
                        cx + r,
                        cy + r,
                        cx - r,
                        STYLE.diamond,
                        STYLE.diamond_stroke
                    );
                }
                Cell::Mult(k) if opts.labels => {
                    let _ = writeln!(
                        marks,
                        r#"<text x="{cx}" y="{cy}" font-family="{}" font-size="{font_size}" fill="{}" text-anchor="middle" dominant-baseline="central">{k}</text>"#,
                        STYLE.font, STYLE.label
                    );
                }
                _ => {}
            }
        }
    }
    svg.push_str(&cells);
    svg.push_str(&marks);
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_svg(
    path: &Path,
    set: &PointSet,
    dist: Option<&ExcludeDistribution>,
    opts: SvgOptions,
) -> Result<()> {
    let svg = render_svg(set, dist, opts)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::graphdist::exclude_dist_walsh;
    use crate::vbf::{graph_of, TruthTable};

    /// Layout built by literally stacking copies, one prepended bit at a time.
    fn recursive_layout(n: u32) -> Vec<Vec<u32>> {
        let mut grid = vec![vec![0u32]];
        for k in 1..=n {
            let top = 1u32 << (k - 1);
            let shifted: Vec<Vec<u32>> = grid
                .iter()
                .map(|r| r.iter().map(|v| v | top).collect())
                .collect();
            if k % 2 == 0 {
                grid.extend(shifted);
            } else {
                for (row, extra) in grid.iter_mut().zip(shifted) {
                    row.extend(extra);
                }
            }
        }
        grid
    }

    #[test]
    fn small_layouts() {
        assert_eq!(layout_index(1, 0), (0, 0));
        assert_eq!(layout_index(1, 1), (0, 1));
        let n2: Vec<_> = (0..4).map(|v| layout_index(2, v)).collect();
        assert_eq!(n2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        let l3 = GridLayout::new(3);
        let top: Vec<_> = (0..4).map(|c| l3.vector_at(0, c)).collect();
        let bottom: Vec<_> = (0..4).map(|c| l3.vector_at(1, c)).collect();
        assert_eq!(top, [0b000, 0b001, 0b100, 0b101]);
        assert_eq!(bottom, [0b010, 0b011, 0b110, 0b111]);
    }

    #[test]
    fn closed_form_matches_recursion() {
        for n in 0..=10 {
            let grid = recursive_layout(n);
            let layout = GridLayout::new(n);
            assert_eq!((grid.len(), grid[0].len()), (layout.rows, layout.cols));
            for (r, row) in grid.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    assert_eq!(layout_index(n, v), (r, c), "n={n} v={v:b}");
                    assert_eq!(layout.vector_at(r, c), v);
                }
            }
        }
    }

    #[test]
    fn text_grids() {
        assert_eq!(render_text(&PointSet::empty(2), None).unwrap(), ". .\n. .\n");
        let s = PointSet::new(2, vec![0]).unwrap();
        assert_eq!(render_text(&s, None).unwrap(), "# .\n. .\n");
        let f = TruthTable::from_power(&FieldSpec::new(3).unwrap(), 3);
        let d = exclude_dist_walsh(&f).unwrap();
        let text = render_text(d.set(), Some(&d)).unwrap();
        assert_eq!(text.lines().count(), 8);
        assert_eq!(text.matches('#').count(), 8);
        assert_eq!(text.matches('1').count(), 56);
        assert!(matches!(
            render_text(&PointSet::empty(15), None),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn svg_structure() {
        let f = TruthTable::from_power(&FieldSpec::new(4).unwrap(), 3);
        let d = exclude_dist_walsh(&f).unwrap();
        let g = graph_of(&f);
        let a = render_svg(&g, Some(&d), SvgOptions::default()).unwrap();
        let b = render_svg(&g, Some(&d), SvgOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<rect").count(), 256);
        assert_eq!(a.matches("<polygon").count(), 16);
        assert_eq!(a.matches(">1</text>").count(), 80);
        assert_eq!(a.matches(">3</text>").count(), 160);
        let bare = render_svg(&g, Some(&d), SvgOptions { cell_size: 10, labels: false }).unwrap();
        assert_eq!(bare.matches("<text").count(), 0);
        assert!(bare.contains(r#"width="160""#));
    }
}
