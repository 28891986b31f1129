//! Shell pyramid diagrams of the elements `h^i x l_{i+j}` and `l_{i+j} x h^i`.
//!
//! The node `h^i x l_{i+j}` belongs to shell `t` when
//! `j_{t-1} <= i < j_t - j`, so shell `t` forms a pyramid whose base row
//! (`j = 0`) has `i_t` nodes. The left half of a rendering shows the
//! `h^i x l_{i+j}` nodes and the right half mirrors it with `l_{i+j} x h^i`.
//! Shells are numbered `1..=h` internally and labelled `t - 1` in renders.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::profile::QuadricProfile;

/// Which half of the diagram a node is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// `h^i x l_{i+j}`.
    Left,
    /// `l_{i+j} x h^i`.
    Right,
}

/// One node of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramNode {
    pub side: Side,
    /// Row `j >= 0`.
    pub j: usize,
    pub i: usize,
    /// Shell index `1 <= t <= h`.
    pub shell: usize,
}

/// All nodes of the shell diagram of a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellDiagram {
    pub pattern: Vec<usize>,
    pub nodes: Vec<DiagramNode>,
}

impl ShellDiagram {
    pub fn r(&self) -> usize {
        *self.pattern.last().expect("pattern is nonempty")
    }

    pub fn height(&self) -> usize {
        self.pattern.len() - 1
    }

    /// Number of rows, the largest higher index.
    pub fn rows(&self) -> usize {
        self.pattern.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    /// Nodes in row `j`.
    pub fn row(&self, j: usize) -> impl Iterator<Item = &DiagramNode> {
        self.nodes.iter().filter(move |n| n.j == j)
    }
}

/// Builds the diagram of a profile.
pub fn shell_diagram(profile: &QuadricProfile) -> ShellDiagram {
    shell_diagram_for_pattern(profile.pattern()).expect("profile patterns are valid")
}

/// Builds the diagram of a bare splitting pattern `0 = j_0 < ... < j_h`.
///
/// The pattern is not checked against any dimension, so layouts can be drawn
/// for patterns that no form realises. Returns `None` unless the pattern
/// starts at 0 and strictly increases with at least one step.
pub fn shell_diagram_for_pattern(pattern: &[usize]) -> Option<ShellDiagram> {
    if pattern.len() < 2 || pattern[0] != 0 || pattern.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let mut nodes = Vec::new();
    for t in 1..pattern.len() {
        let (lo, hi) = (pattern[t - 1], pattern[t]);
        for j in 0..hi - lo {
            for i in lo..hi - j {
                for side in [Side::Left, Side::Right] {
                    nodes.push(DiagramNode { side, j, i, shell: t });
                }
            }
        }
    }
    nodes.sort();
    Some(ShellDiagram {
        pattern: pattern.to_vec(),
        nodes,
    })
}

/// Columns between the two halves.
const MIRROR_GAP: usize = 4;

struct Layout {
    width: usize,
}

impl Layout {
    fn new(d: &ShellDiagram) -> Self {
        let left_max = 2 * (d.r() - 1) + 2 * (d.height() - 1);
        Layout {
            width: 2 * left_max + MIRROR_GAP,
        }
    }

    fn left_x(&self, i: usize, j: usize, shell: usize) -> usize {
        2 * i + j + 2 * (shell - 1)
    }

    fn x(&self, n: &DiagramNode) -> usize {
        let lx = self.left_x(n.i, n.j, n.shell);
        match n.side {
            Side::Left => lx,
            Side::Right => self.width - lx,
        }
    }

    fn label_centres(&self, d: &ShellDiagram, t: usize) -> [usize; 2] {
        let c = d.pattern[t - 1] + d.pattern[t] - 1 + 2 * (t - 1);
        [c, self.width - c]
    }
}

/// Renders the diagram as text: rows from the top down, `o` for a node, then
/// a line with the shell labels centred under each pyramid.
pub fn render_ascii(d: &ShellDiagram) -> String {
    let layout = Layout::new(d);
    let mut out = String::new();
    for j in (0..d.rows()).rev() {
        let mut line = vec![b' '; layout.width + 1];
        for n in d.row(j) {
            line[layout.x(n)] = b'o';
        }
        push_trimmed(&mut out, &line);
    }
    let mut labels = vec![b' '; layout.width + 8];
    for t in 1..=d.height() {
        let text = (t - 1).to_string();
        for c in layout.label_centres(d, t) {
            let start = c.saturating_sub((text.len() - 1) / 2);
            for (k, ch) in text.bytes().enumerate() {
                labels[start + k] = ch;
            }
        }
    }
    push_trimmed(&mut out, &labels);
    out
}

fn push_trimmed(out: &mut String, line: &[u8]) {
    let s = String::from_utf8_lossy(line);
    out.push_str(s.trim_end());
    out.push('\n');
}

const SHELL_COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Renders the diagram as a standalone SVG document. The output depends only
/// on the diagram.
pub fn render_svg(d: &ShellDiagram) -> String {
    let layout = Layout::new(d);
    let (sx, sy, margin) = (12usize, 24usize, 20usize);
    let rows = d.rows();
    let width = layout.width * sx + 2 * margin;
    let height = (rows + 1) * sy + 2 * margin;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for n in &d.nodes {
        let cx = margin + layout.x(n) * sx;
        let cy = margin + (rows - 1 - n.j) * sy;
        let colour = SHELL_COLOURS[(n.shell - 1) % SHELL_COLOURS.len()];
        let title = match n.side {
            Side::Left => format!("h^{} x l_{}", n.i, n.i + n.j),
            Side::Right => format!("l_{} x h^{}", n.i + n.j, n.i),
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{cx}" cy="{cy}" r="4" fill="{colour}"><title>{title}</title></circle>"#
        );
    }
    let ly = margin + rows * sy;
    for t in 1..=d.height() {
        for c in layout.label_centres(d, t) {
            let x = margin + c * sx;
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{ly}" text-anchor="middle" font-family="monospace" font-size="12">{}</text>"#,
                t - 1
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
