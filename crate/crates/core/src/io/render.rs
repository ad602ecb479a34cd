//! Plain-text tableau layout: a column-number header (1-based), the w-row,
//! then one row per variable, right-aligned.

use crate::scalar::{to_decimal_string, Field};
use crate::tableau::{DualTableau, TableauSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    /// Canonical fractions, e.g. `-65/2`.
    Fraction,
    /// Rounded half away from zero to `places` digits, trailing zeros
    /// dropped; `comma` selects `,` as the separator.
    Decimal { places: usize, comma: bool },
}

pub fn render_tableau<T: Field>(tab: &DualTableau<T>, style: RenderStyle) -> String {
    render_snapshot(&tab.snapshot(), style)
}

pub fn render_snapshot<T: Field>(snap: &TableauSnapshot<T>, style: RenderStyle) -> String {
    let cell = |v: &T| match style {
        RenderStyle::Fraction => v.to_string(),
        RenderStyle::Decimal { places, comma } => {
            to_decimal_string(&v.to_rational(), places, comma)
        }
    };
    let width = snap.w_row.len();
    let mut grid: Vec<Vec<String>> = vec![(1..=width).map(|c| c.to_string()).collect()];
    grid.push(snap.w_row.iter().map(cell).collect());
    grid.extend(snap.rows.iter().map(|r| r.iter().map(cell).collect()));

    let widths: Vec<usize> = (0..width)
        .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in grid {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        out.push_str(&line.join("  "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{corpus, InequalitySystem};
    use crate::scalar::{parse_rational, Rational};
    use crate::solve::{solve, SolveOptions};

    fn tokens(s: &str) -> Vec<Vec<String>> {
        s.lines()
            .map(|l| l.split_whitespace().map(String::from).collect())
            .collect()
    }

    #[test]
    fn example_3_1_initial_fraction_style() {
        let tab = DualTableau::build(&corpus::example_3_1(), None, None).unwrap();
        let text = render_tableau(&tab, RenderStyle::Fraction);
        let expected = "1 2 3 4 5 6\n2 1 -2 0 0 0\n1 0 -1 1 0 0\n3 1 0 0 1 0\n0 0 1 0 0 1\n";
        assert_eq!(tokens(&text), tokens(expected));
    }

    #[test]
    fn example_3_2_final_decimal_style() {
        let mut tab = DualTableau::build(&corpus::example_3_2_system(), None, None).unwrap();
        solve(&mut tab, &SolveOptions::default());
        let text = render_tableau(
            &tab,
            RenderStyle::Decimal {
                places: 3,
                comma: false,
            },
        );
        assert!(tokens(&text)[3].contains(&"0.148".to_string()));
        let comma = render_tableau(
            &tab,
            RenderStyle::Decimal {
                places: 3,
                comma: true,
            },
        );
        assert!(tokens(&comma)[2].contains(&"0,037".to_string()));
    }

    #[test]
    fn empty_system_layout() {
        let s = InequalitySystem::<Rational>::new(vec![], vec![], 2).unwrap();
        let tab = DualTableau::build(&s, None, None).unwrap();
        assert_eq!(
            render_tableau(&tab, RenderStyle::Fraction),
            "1  2\n0  0\n1  0\n0  1\n"
        );
    }

    #[test]
    fn fraction_cells_parse_back() {
        let km = corpus::klee_minty_4();
        let spec = crate::model::ThresholdSpec::new(vec![crate::scalar::int(500)]).unwrap();
        let mut tab = DualTableau::build(km.system(), Some(km.c()), Some(&spec)).unwrap();
        solve(&mut tab, &SolveOptions::default());
        let grid = tokens(&render_tableau(&tab, RenderStyle::Fraction));
        let parsed: Vec<Rational> = grid[1].iter().map(|t| parse_rational(t).unwrap()).collect();
        assert_eq!(parsed, tab.w_row());
        for (line, row) in grid[2..].iter().zip(tab.rows()) {
            let parsed: Vec<Rational> = line.iter().map(|t| parse_rational(t).unwrap()).collect();
            assert_eq!(&parsed, row);
        }
    }
}
