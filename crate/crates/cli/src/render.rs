use toric_hld::{CodeGeometry, Syndrome};

/// Vertex and plaquette detections as two side-by-side `L×L` grids.
pub fn syndrome_grid(g: &CodeGeometry, s: &Syndrome) -> String {
    let l = g.l();
    let nv = g.n_vertices();
    let cell = |i: usize| if s.get(i) { '●' } else { '·' };
    let mut out = String::new();
    for r in 0..l {
        out.push_str("  ");
        out.extend((0..l).map(|c| cell(r * l + c)));
        out.push_str("   ");
        out.extend((0..l).map(|c| cell(nv + r * l + c)));
        out.push('\n');
    }
    out
}
