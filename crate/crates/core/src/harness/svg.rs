//! Dependency-free SVG snapshots.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::csv::write_file;
use crate::matrix::Matrix;
use crate::metrics::{fit_support, Support};

pub const REAL_COLOR: &str = "#1f77b4";
pub const GENERATED_COLOR: &str = "#ff7f0e";
const CANVAS_PX: f64 = 480.0;

fn push_markers(out: &mut String, points: &Matrix, color: &str, class: &str, radius: f64) {
    writeln!(out, r#"<g class="{class}" fill="{color}" fill-opacity="0.7">"#).unwrap();
    for r in 0..points.rows() {
        let (x, y) = (points.get(r, 0), points.get(r, 1));
        // SVG's y axis points down.
        writeln!(out, r#"<circle cx="{x:.5}" cy="{:.5}" r="{radius:.5}"/>"#, -y).unwrap();
    }
    out.push_str("</g>\n");
}

/// Ground truth (blue) underneath generated points (orange), framed by the
/// ground truth's metric support.
pub fn render_scatter_svg(real: &Matrix, generated: &Matrix) -> Result<String> {
    if real.rows() == 0 || generated.rows() == 0 {
        return Err(Error::Config("scatter plot needs non-empty point sets".into()));
    }
    if real.cols() != 2 || generated.cols() != 2 {
        return Err(Error::shape("render_scatter_svg", "2 columns", format!("{} / {}", real.cols(), generated.cols())));
    }
    let Support { x_min, x_max, y_min, y_max } = fit_support(real)?;
    let (w, h) = (x_max - x_min, y_max - y_min);
    let radius = 0.004 * w.max(h);
    let (px_w, px_h) = if w >= h {
        (CANVAS_PX, CANVAS_PX * h / w)
    } else {
        (CANVAS_PX * w / h, CANVAS_PX)
    };
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{px_w:.1}" height="{px_h:.1}" viewBox="{x_min:.5} {:.5} {w:.5} {h:.5}">"#,
        -y_max
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="{x_min:.5}" y="{:.5}" width="{w:.5}" height="{h:.5}" fill="white"/>"#,
        -y_max
    )
    .unwrap();
    push_markers(&mut out, real, REAL_COLOR, "ground-truth", radius);
    push_markers(&mut out, generated, GENERATED_COLOR, "generated", radius);
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_scatter_svg(real: &Matrix, generated: &Matrix, path: &Path) -> Result<()> {
    write_file(path, &render_scatter_svg(real, generated)?)
}

/// The first 16 rows of `images` as a 4×4 grid of grayscale cells, one
/// `rect` per pixel.
pub fn render_image_grid_svg(images: &Matrix, image_rows: usize, image_cols: usize) -> Result<String> {
    if images.cols() != image_rows * image_cols {
        return Err(Error::shape(
            "render_image_grid_svg",
            image_rows * image_cols,
            images.cols(),
        ));
    }
    const SIDE: usize = 4;
    const GAP: usize = 2;
    let cell_w = image_cols + GAP;
    let cell_h = image_rows + GAP;
    let (w, h) = (SIDE * cell_w + GAP, SIDE * cell_h + GAP);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w * 4,
        h * 4
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="rgb(64,64,64)"/>"#).unwrap();
    for k in 0..images.rows().min(SIDE * SIDE) {
        let (ox, oy) = (GAP + (k % SIDE) * cell_w, GAP + (k / SIDE) * cell_h);
        writeln!(out, r#"<g class="digit" transform="translate({ox},{oy})">"#).unwrap();
        for (i, &v) in images.row(k).iter().enumerate() {
            let level = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
            writeln!(
                out,
                r#"<rect x="{}" y="{}" width="1" height="1" fill="rgb({level},{level},{level})"/>"#,
                i % image_cols,
                i / image_cols
            )
            .unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_image_grid_svg(images: &Matrix, image_rows: usize, image_cols: usize, path: &Path) -> Result<()> {
    write_file(path, &render_image_grid_svg(images, image_rows, image_cols)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_layers_and_counts() {
        let real = Matrix::from_vec(3, 2, vec![0.0, 0.0, 1.0, 1.0, 2.0, -1.0]).unwrap();
        let generated = Matrix::from_vec(2, 2, vec![0.5, 0.5, 9.0, 9.0]).unwrap();
        let svg = render_scatter_svg(&real, &generated).unwrap();
        assert_eq!(svg.matches("<circle").count(), 5);
        assert!(svg.find(REAL_COLOR).unwrap() < svg.find(GENERATED_COLOR).unwrap());
        assert!(render_scatter_svg(&real, &Matrix::zeros(0, 2)).is_err());
    }

    #[test]
    fn grid_has_one_rect_per_pixel() {
        let images = Matrix::filled(20, 4, 0.5);
        let svg = render_image_grid_svg(&images, 2, 2).unwrap();
        // background + 16 images × 4 pixels
        assert_eq!(svg.matches("<rect").count(), 1 + 16 * 4);
        assert!(svg.contains("rgb(128,128,128)"));
    }
}
