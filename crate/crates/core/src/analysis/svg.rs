//! Minimal SVG charts for the emotion profile and flip-flop traces.

use std::fmt::Write;

use crate::lexicons::Family;

use super::{FlipFlopPoint, ThemeEmotions};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#d62728", "#ff7f0e", "#8c564b", "#7f7f7f", "#2ca02c", "#1f77b4", "#9467bd", "#17becf",
];

fn header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = write!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = write!(
        out,
        r##"<line x1="{MARGIN}" y1="{}" x2="{}" y2="{}" stroke="#000"/>"##,
        HEIGHT - MARGIN,
        WIDTH - MARGIN,
        HEIGHT - MARGIN
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Grouped bars: one group per theme, one bar per emotion share.
pub fn emotion_profile_svg(profile: &[ThemeEmotions], theme_names: &[String]) -> String {
    let mut out = String::new();
    header(&mut out, "Emotion share per theme");
    let groups = profile.len().max(1) as f64;
    let group_w = (WIDTH - 2.0 * MARGIN) / groups;
    let bar_w = group_w * 0.8 / 8.0;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    for (g, theme) in profile.iter().enumerate() {
        let x0 = MARGIN + g as f64 * group_w + group_w * 0.1;
        if let Some(shares) = &theme.shares {
            for (e, share) in shares.iter().enumerate() {
                let h = share * plot_h;
                let _ = write!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{}: {:.3}</title></rect>"#,
                    x0 + e as f64 * bar_w,
                    HEIGHT - MARGIN - h,
                    bar_w,
                    h,
                    PALETTE[e],
                    Family::Emotions.categories()[e],
                    share
                );
            }
        }
        let name = theme_names.get(g).cloned().unwrap_or_else(|| format!("theme {}", theme.theme));
        let _ = write!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="10">{}</text>"#,
            x0 + group_w * 0.4,
            HEIGHT - MARGIN + 14.0,
            escape(&name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Two polylines across the user's themes.
pub fn flipflop_svg(trace: &[FlipFlopPoint], names: (&str, &str)) -> String {
    let mut out = String::new();
    header(&mut out, &format!("{} vs {} across themes", names.0, names.1));
    let max = trace
        .iter()
        .flat_map(|p| [p.first, p.second])
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let n = trace.len().max(2) as f64;
    let x = |i: usize| MARGIN + i as f64 * (WIDTH - 2.0 * MARGIN) / (n - 1.0);
    let y = |v: f64| HEIGHT - MARGIN - v / max * (HEIGHT - 2.0 * MARGIN);
    for (series, color, dash) in [(0, PALETTE[3], ""), (1, PALETTE[4], r#" stroke-dasharray="6 3""#)] {
        let points: Vec<String> = trace
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let v = if series == 0 { p.first } else { p.second };
                format!("{:.2},{:.2}", x(i), y(v))
            })
            .collect();
        let _ = write!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2"{dash} points="{}"/>"#,
            points.join(" ")
        );
    }
    for (i, p) in trace.iter().enumerate() {
        let _ = write!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="10">theme {}</text>"#,
            x(i),
            HEIGHT - MARGIN + 14.0,
            p.theme
        );
    }
    out.push_str("</svg>\n");
    out
}
