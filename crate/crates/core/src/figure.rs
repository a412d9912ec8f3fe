//! The long/short subdivision of `[0,1)` by multiples of `α`.
//!
//! At level `n` every interval of the previous level splits into pieces of
//! length `D_n` ("long") followed by one piece of length `D_n − D_{n+1}`
//! ("short"): a long parent holds `a_n − 1` long pieces, a short parent
//! holds `a_n − 2`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncf::NcfExpansion;
use crate::numerics::Surd;

pub const MAX_LEVELS: usize = 8;

const WIDTH: f64 = 1000.0;
const MARGIN: f64 = 20.0;
const ROW: f64 = 36.0;
const BAR: f64 = 22.0;
const LONG_FILL: &str = "#4c78a8";
const SHORT_FILL: &str = "#e45756";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub start: Surd,
    pub length: Surd,
    pub long: bool,
    /// Index of the enclosing segment one level up.
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Figure {
    /// `levels[0]` is the unit interval; `levels[n]` the level-`n` pieces.
    pub levels: Vec<Vec<Segment>>,
}

/// `(long, short)` counts of one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub long: usize,
    pub short: usize,
}

impl Figure {
    pub fn counts(&self, level: usize) -> Counts {
        tally(self.levels[level].iter())
    }

    /// Counts of the children of segment `parent` of level `level − 1`.
    pub fn children_counts(&self, level: usize, parent: usize) -> Counts {
        tally(self.levels[level].iter().filter(|s| s.parent == Some(parent)))
    }

    pub fn to_svg(&self) -> String {
        let rows = self.levels.len() - 1;
        let height = 2.0 * MARGIN + ROW * rows as f64;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height}" viewBox="0 0 {w} {height}">"#,
            w = WIDTH + 2.0 * MARGIN
        );
        for (level, row) in self.levels.iter().enumerate().skip(1) {
            let y = MARGIN + ROW * (level - 1) as f64;
            for seg in row {
                let x = MARGIN + WIDTH * seg.start.to_f64();
                let w = WIDTH * seg.length.to_f64();
                let fill = if seg.long { LONG_FILL } else { SHORT_FILL };
                let _ = writeln!(
                    out,
                    r#"  <rect x="{x:.4}" y="{y:.1}" width="{w:.4}" height="{BAR:.1}" fill="{fill}" stroke="white" stroke-width="0.5"/>"#
                );
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn tally<'a>(it: impl Iterator<Item = &'a Segment>) -> Counts {
    let mut c = Counts { long: 0, short: 0 };
    for s in it {
        if s.long {
            c.long += 1;
        } else {
            c.short += 1;
        }
    }
    c
}

/// Subdivides `[0,1)` down to `levels` levels.
pub fn run_figure(alpha: &NcfExpansion, levels: usize) -> Result<Figure> {
    if levels == 0 || levels > MAX_LEVELS {
        return Err(Error::OutOfRange(format!("levels must lie in 1..={MAX_LEVELS}")));
    }
    let mut out = vec![vec![Segment {
        start: Surd::zero(),
        length: Surd::one(),
        long: true,
        parent: None,
    }]];
    for n in 1..=levels {
        let a = alpha.digit(n)?;
        let d = alpha.d(n)?;
        let short_len = &d - &alpha.d(n + 1)?;
        let mut row = Vec::new();
        for (p, parent) in out[n - 1].iter().enumerate() {
            let longs = if parent.long { a - 1 } else { a - 2 };
            let mut x = parent.start.clone();
            for _ in 0..longs {
                row.push(Segment {
                    start: x.clone(),
                    length: d.clone(),
                    long: true,
                    parent: Some(p),
                });
                x = &x + &d;
            }
            row.push(Segment {
                start: x,
                length: short_len.clone(),
                long: false,
                parent: Some(p),
            });
        }
        out.push(row);
    }
    Ok(Figure { levels: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_three() -> NcfExpansion {
        NcfExpansion::periodic(&[], &[5, 3]).unwrap()
    }

    #[test]
    fn pieces_tile_their_parent() {
        let fig = run_figure(&five_three(), 4).unwrap();
        for n in 1..=4 {
            for (p, parent) in fig.levels[n - 1].iter().enumerate() {
                let kids: Vec<&Segment> = fig.levels[n].iter().filter(|s| s.parent == Some(p)).collect();
                assert_eq!(kids[0].start, parent.start);
                for w in kids.windows(2) {
                    assert_eq!(&w[0].start + &w[0].length, w[1].start);
                }
                let last = kids.last().unwrap();
                assert_eq!(&last.start + &last.length, &parent.start + &parent.length);
            }
        }
    }

    #[test]
    fn level_one_cuts_at_multiples_of_alpha() {
        let alpha = five_three();
        let fig = run_figure(&alpha, 1).unwrap();
        let a = alpha.exact_value("test").unwrap();
        for (k, seg) in fig.levels[1].iter().enumerate() {
            assert_eq!(seg.start, a.mul_int(k as i64));
        }
    }

    #[test]
    fn two_leading_digit_gives_one_long_one_short() {
        let alpha = NcfExpansion::periodic(&[2], &[3]).unwrap();
        let fig = run_figure(&alpha, 1).unwrap();
        assert_eq!(fig.counts(1), Counts { long: 1, short: 1 });
    }

    #[test]
    fn level_bounds() {
        assert!(run_figure(&five_three(), 0).is_err());
        assert!(run_figure(&five_three(), 9).is_err());
    }

    #[test]
    fn svg_is_stable() {
        let a = run_figure(&five_three(), 3).unwrap().to_svg();
        let b = run_figure(&five_three(), 3).unwrap().to_svg();
        assert_eq!(a, b);
        assert_eq!(a.matches("<rect").count(), 5 + 14 + 65);
    }
}
