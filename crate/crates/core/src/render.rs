//! Space-time diagram output.
//!
//! PGM gray map: symbol `i` of an alphabet of `k` symbols is drawn with gray
//! level `255 - round(255 * i / (k - 1))`, so the first declared symbol is
//! white and the last is black (a one-symbol alphabet is all white).

use crate::alphabet::{Alphabet, Sym};
use crate::config::PresentedConfig;

/// Cells `[from, to)` of every configuration, one row per time step.
pub fn spacetime(configs: &[PresentedConfig], from: i64, to: i64) -> Vec<Vec<Sym>> {
    configs.iter().map(|c| c.window(from, to)).collect()
}

pub fn gray_level(a: &Alphabet, s: Sym) -> u8 {
    let k = a.len();
    if k <= 1 {
        return 255;
    }
    let i = s.index() as f64;
    255 - (255.0 * i / (k - 1) as f64).round() as u8
}

/// One line per row using the alphabet's glyphs.
pub fn ascii(a: &Alphabet, rows: &[Vec<Sym>]) -> String {
    let mut s = String::new();
    for r in rows {
        s.extend(r.iter().map(|&x| a.glyph(x)));
        s.push('\n');
    }
    s
}

/// Binary `P5` image, one pixel per cell.
pub fn pgm(a: &Alphabet, rows: &[Vec<Sym>]) -> Vec<u8> {
    let w = rows.first().map_or(0, Vec::len);
    let mut out = format!("P5\n{} {}\n255\n", w, rows.len()).into_bytes();
    for r in rows {
        out.extend(r.iter().map(|&x| gray_level(a, x)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::Rule;

    #[test]
    fn pgm_header_and_levels() {
        let min = Rule::min();
        let a = min.alphabet();
        let rows = vec![a.parse_word("01").unwrap(), a.parse_word("10").unwrap()];
        let img = pgm(a, &rows);
        assert!(img.starts_with(b"P5\n2 2\n255\n"));
        assert_eq!(&img[img.len() - 4..], &[255, 0, 0, 255]);
        assert_eq!(ascii(a, &rows), "01\n10\n");
    }
}
