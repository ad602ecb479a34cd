//! Problem data: inequality systems `Ax >= b, x >= 0`, linear programs over
//! them, and the transformations the solver layers use.

use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("a system needs at least one variable")]
    NoVariables,
    #[error("row index {index} out of range 1..={rows}")]
    RowOutOfRange { index: usize, rows: usize },
    #[error("row scale factor must be positive")]
    NonPositiveScale,
    #[error("Klee-Minty dimension must be at least 1")]
    InvalidDimension,
    #[error("threshold values must be non-empty and strictly increasing")]
    BadThresholds,
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),
}

/// `Ax >= b` with `x >= 0` implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalitySystem<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    n: usize,
}

impl<T: Field> InequalitySystem<T> {
    /// Validates dimensions. `n` is needed separately because `A` may have no
    /// rows.
    pub fn new(a: Vec<Vec<T>>, b: Vec<T>, n: usize) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::NoVariables);
        }
        if let Some((row, r)) = a.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(ModelError::RaggedMatrix {
                row: row + 1,
                expected: n,
                found: r.len(),
            });
        }
        if b.len() != a.len() {
            return Err(ModelError::LengthMismatch {
                what: "b",
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(Self { a, b, n })
    }

    /// Builds from a non-empty matrix, inferring `n` from the first row.
    pub fn from_rows(a: Vec<Vec<T>>, b: Vec<T>) -> Result<Self, ModelError> {
        let n = a.first().map_or(0, Vec::len);
        Self::new(a, b, n)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Vec<T>] {
        &self.a
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    pub fn row(&self, i: usize) -> (&[T], &T) {
        (&self.a[i], &self.b[i])
    }

    /// Appends the constraint `row · x >= rhs`.
    pub fn with_row(mut self, row: Vec<T>, rhs: T) -> Result<Self, ModelError> {
        if row.len() != self.n {
            return Err(ModelError::LengthMismatch {
                what: "row",
                expected: self.n,
                found: row.len(),
            });
        }
        self.a.push(row);
        self.b.push(rhs);
        Ok(self)
    }

    /// Multiplies row `index` (1-based) and its right-hand side by `factor`.
    pub fn scale_row(&self, index: usize, factor: &T) -> Result<Self, ModelError> {
        if index == 0 || index > self.num_rows() {
            return Err(ModelError::RowOutOfRange {
                index,
                rows: self.num_rows(),
            });
        }
        if !factor.is_positive() {
            return Err(ModelError::NonPositiveScale);
        }
        let mut out = self.clone();
        let i = index - 1;
        for v in &mut out.a[i] {
            *v = v.clone() * factor.clone();
        }
        out.b[i] = out.b[i].clone() * factor.clone();
        Ok(out)
    }

    /// Converts every entry to another field.
    pub fn map_scalar<U: Field>(&self, f: impl Fn(&T) -> U) -> InequalitySystem<U> {
        InequalitySystem {
            a: self.a.iter().map(|r| r.iter().map(&f).collect()).collect(),
            b: self.b.iter().map(&f).collect(),
            n: self.n,
        }
    }
}

/// Minimize `c·x` subject to an [`InequalitySystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram<T> {
    c: Vec<T>,
    system: InequalitySystem<T>,
}

impl<T: Field> LinearProgram<T> {
    pub fn new(c: Vec<T>, system: InequalitySystem<T>) -> Result<Self, ModelError> {
        if c.len() != system.num_vars() {
            return Err(ModelError::LengthMismatch {
                what: "c",
                expected: system.num_vars(),
                found: c.len(),
            });
        }
        Ok(Self { c, system })
    }

    pub fn c(&self) -> &[T] {
        &self.c
    }

    pub fn system(&self) -> &InequalitySystem<T> {
        &self.system
    }

    pub fn num_vars(&self) -> usize {
        self.system.num_vars()
    }

    pub fn num_rows(&self) -> usize {
        self.system.num_rows()
    }

    /// The constraint `-c·x >= t`, i.e. an upper bound `-t` on the objective.
    pub fn objective_threshold_row(&self, t: &T) -> (Vec<T>, T) {
        (self.c.iter().map(|v| -v.clone()).collect(), t.clone())
    }

    /// The system with `-c·x >= t` appended.
    pub fn system_with_threshold(&self, t: &T) -> InequalitySystem<T> {
        let (row, rhs) = self.objective_threshold_row(t);
        self.system
            .clone()
            .with_row(row, rhs)
            .expect("threshold row has the right length")
    }

    /// Directions `d >= 0` with `Ad >= 0` and `-c·d >= 1`; feasible exactly
    /// when the objective is unbounded below over a non-empty feasible set.
    pub fn recession_system(&self) -> InequalitySystem<T> {
        let b = vec![T::zero(); self.num_rows()];
        InequalitySystem::new(self.system.a.clone(), b, self.num_vars())
            .and_then(|s| s.with_row(self.c.iter().map(|v| -v.clone()).collect(), T::one()))
            .expect("dimensions carried over from a valid program")
    }

    /// Primal feasibility, dual feasibility and a non-positive duality gap as
    /// one system over `(x, y)`; its solutions are exactly the optimal
    /// primal-dual pairs.
    ///
    /// Rows: `-c·x + b·y >= 0`, then `Ax >= b`, then `-Aᵀy >= -c`.
    pub fn primal_dual_system(&self) -> InequalitySystem<T> {
        let (n, m) = (self.num_vars(), self.num_rows());
        let width = n + m;
        let mut a = Vec::with_capacity(1 + m + n);
        let mut b = Vec::with_capacity(1 + m + n);

        let gap: Vec<T> = self
            .c
            .iter()
            .map(|v| -v.clone())
            .chain(self.system.b.iter().cloned())
            .collect();
        a.push(gap);
        b.push(T::zero());

        for (row, rhs) in self.system.a.iter().zip(&self.system.b) {
            let mut r = row.clone();
            r.resize(width, T::zero());
            a.push(r);
            b.push(rhs.clone());
        }

        for j in 0..n {
            let mut r = vec![T::zero(); n];
            r.extend(self.system.a.iter().map(|row| -row[j].clone()));
            a.push(r);
            b.push(-self.c[j].clone());
        }

        InequalitySystem::new(a, b, width).expect("primal-dual dimensions are consistent")
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        crate::scalar::dot(&self.c, x)
    }
}

/// Objective bounds `-c·x >= t_1 < t_2 < ... < t_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSpec<T> {
    values: Vec<T>,
}

impl<T: Field> ThresholdSpec<T> {
    pub fn new(values: Vec<T>) -> Result<Self, ModelError> {
        if values.is_empty() || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::BadThresholds);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Either kind of problem, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem<T> {
    System(InequalitySystem<T>),
    Program(LinearProgram<T>),
}

impl<T: Field> Problem<T> {
    pub fn system(&self) -> &InequalitySystem<T> {
        match self {
            Problem::System(s) => s,
            Problem::Program(lp) => lp.system(),
        }
    }

    pub fn program(&self) -> Option<&LinearProgram<T>> {
        match self {
            Problem::System(_) => None,
            Problem::Program(lp) => Some(lp),
        }
    }
}

/// The `d`-dimensional Klee-Minty cube as a minimization:
/// `c_j = -2^(d-j)`, row `i` has `-2^(i-j+1)` left of the diagonal and `-1`
/// on it, `b_i = -5^i`.
pub fn klee_minty<T: Field>(d: usize) -> Result<LinearProgram<T>, ModelError> {
    if d == 0 {
        return Err(ModelError::InvalidDimension);
    }
    let pow = |base: i64, e: usize| {
        let mut v = T::one();
        for _ in 0..e {
            v = v * T::from_i64(base);
        }
        v
    };
    let c = (1..=d).map(|j| -pow(2, d - j)).collect();
    let a = (1..=d)
        .map(|i| {
            (1..=d)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => -pow(2, i - j + 1),
                    std::cmp::Ordering::Equal => -T::one(),
                    std::cmp::Ordering::Greater => T::zero(),
                })
                .collect()
        })
        .collect();
    let b = (1..=d).map(|i| -pow(5, i)).collect();
    LinearProgram::new(c, InequalitySystem::new(a, b, d)?)
}

/// Built-in worked examples.
pub mod corpus {
    use super::*;
    use crate::scalar::{int, rational, Rational};

    pub const NAMES: [&str; 4] = [
        "example_3_1",
        "example_3_2_system",
        "example_3_2_lp",
        "klee_minty_4",
    ];

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(int).collect()
    }

    pub fn example_3_1() -> InequalitySystem<Rational> {
        InequalitySystem::from_rows(
            vec![ints(&[1, 3, 0]), ints(&[0, 1, 0]), ints(&[-1, 0, 1])],
            ints(&[2, 1, -2]),
        )
        .expect("static data")
    }

    /// The degenerate cycling instance: two homogeneous rows plus the
    /// objective row bounded below by 18.
    pub fn example_3_2_system() -> InequalitySystem<Rational> {
        let third = rational(1, 3).expect("static data");
        InequalitySystem::from_rows(
            vec![
                ints(&[2, 9, -1, -9]),
                vec![-third.clone(), int(-1), third, int(2)],
                ints(&[-2, -3, 1, 12]),
            ],
            ints(&[0, 0, 18]),
        )
        .expect("static data")
    }

    pub fn example_3_2_lp() -> LinearProgram<Rational> {
        LinearProgram::new(ints(&[-2, -3, 1, 12]), example_3_2_system()).expect("static data")
    }

    pub fn klee_minty_4() -> LinearProgram<Rational> {
        klee_minty(4).expect("static data")
    }

    pub fn lookup(name: &str) -> Result<Problem<Rational>, ModelError> {
        Ok(match name {
            "example_3_1" => Problem::System(example_3_1()),
            "example_3_2_system" => Problem::System(example_3_2_system()),
            "example_3_2_lp" => Problem::Program(example_3_2_lp()),
            "klee_minty_4" => Problem::Program(klee_minty_4()),
            other => return Err(ModelError::UnknownCorpus(other.to_string())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::corpus::*;
    use super::*;
    use crate::scalar::{int, rational, Rational};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(int).collect()
    }

    fn satisfies(s: &InequalitySystem<Rational>, x: &[Rational]) -> bool {
        x.iter().all(|v| *v >= int(0))
            && s.a()
                .iter()
                .zip(s.b())
                .all(|(r, b)| crate::scalar::dot(r, x) >= *b)
    }

    #[test]
    fn make_system_validation() {
        let s = example_3_1();
        assert_eq!((s.num_rows(), s.num_vars()), (3, 3));
        let empty = InequalitySystem::<Rational>::new(vec![], vec![], 1).unwrap();
        assert_eq!(empty.num_rows(), 0);
        assert!(matches!(
            InequalitySystem::new(
                vec![ints(&[1, 2, 3]), ints(&[1, 2, 3])],
                ints(&[1, 2, 3]),
                3
            ),
            Err(ModelError::LengthMismatch { what: "b", .. })
        ));
        assert!(matches!(
            InequalitySystem::new(vec![ints(&[1, 2, 3]), ints(&[1, 2])], ints(&[1, 2]), 3),
            Err(ModelError::RaggedMatrix { row: 2, .. })
        ));
        assert_eq!(
            InequalitySystem::<Rational>::new(vec![], vec![], 0),
            Err(ModelError::NoVariables)
        );
    }

    #[test]
    fn scale_row_examples() {
        let s = example_3_1();
        let scaled = s.scale_row(2, &int(3)).unwrap();
        assert_eq!(scaled.row(1), (&ints(&[0, 3, 0])[..], &int(3)));
        assert_eq!(s.scale_row(1, &int(1)).unwrap(), s);
        assert_eq!(s.scale_row(1, &int(-2)), Err(ModelError::NonPositiveScale));
        assert_eq!(s.scale_row(1, &int(0)), Err(ModelError::NonPositiveScale));
        assert!(matches!(
            s.scale_row(4, &int(2)),
            Err(ModelError::RowOutOfRange { .. })
        ));
    }

    #[test]
    fn threshold_rows() {
        let km = klee_minty_4();
        assert_eq!(
            km.objective_threshold_row(&int(500)),
            (ints(&[8, 4, 2, 1]), int(500))
        );
        let zero = LinearProgram::new(
            ints(&[0, 0]),
            InequalitySystem::new(vec![], vec![], 2).unwrap(),
        )
        .unwrap();
        assert_eq!(
            zero.objective_threshold_row(&int(0)),
            (ints(&[0, 0]), int(0))
        );
        let lp = example_3_2_lp();
        assert_eq!(
            lp.objective_threshold_row(&int(18)),
            (ints(&[2, 3, -1, -12]), int(18))
        );
    }

    #[test]
    fn klee_minty_d4_matches_printed_instance() {
        let km: LinearProgram<Rational> = klee_minty(4).unwrap();
        assert_eq!(km.c(), &ints(&[-8, -4, -2, -1])[..]);
        let s = km.system();
        assert_eq!(s.a()[0], ints(&[-1, 0, 0, 0]));
        assert_eq!(s.a()[1], ints(&[-4, -1, 0, 0]));
        assert_eq!(s.a()[2], ints(&[-8, -4, -1, 0]));
        assert_eq!(s.a()[3], ints(&[-16, -8, -4, -1]));
        assert_eq!(s.b(), &ints(&[-5, -25, -125, -625])[..]);
        assert_eq!(klee_minty::<Rational>(0), Err(ModelError::InvalidDimension));
    }

    #[test]
    fn klee_minty_closed_forms() {
        for d in 1..=10usize {
            let km: LinearProgram<Rational> = klee_minty(d).unwrap();
            for j in 0..d {
                assert_eq!(km.c()[j], -int(1 << (d - 1 - j)));
            }
            for i in 0..d {
                assert_eq!(km.system().b()[i], -int(5i64.pow(i as u32 + 1)));
                for j in 0..d {
                    let expect = if j < i {
                        -int(1 << (i - j + 1))
                    } else if j == i {
                        int(-1)
                    } else {
                        int(0)
                    };
                    assert_eq!(km.system().a()[i][j], expect);
                }
            }
        }
        // d=1: min -x1 s.t. -x1 >= -5
        let km1: LinearProgram<Rational> = klee_minty(1).unwrap();
        assert_eq!(km1.c(), &[int(-1)][..]);
        assert_eq!(km1.system().b(), &[int(-5)][..]);
    }

    #[test]
    fn primal_dual_layout() {
        let lp = example_3_2_lp();
        let pd = lp.primal_dual_system();
        assert_eq!((pd.num_rows(), pd.num_vars()), (8, 7));
        let mut point = ints(&[0, 2, 0, 2]);
        point.extend(ints(&[0, 0, 1]));
        assert!(satisfies(&pd, &point));
        // the gap row is tight at that point
        assert_eq!(crate::scalar::dot(&pd.a()[0], &point), int(0));

        let free = LinearProgram::new(
            ints(&[1, 2]),
            InequalitySystem::new(vec![], vec![], 2).unwrap(),
        )
        .unwrap();
        let pd = free.primal_dual_system();
        assert_eq!((pd.num_rows(), pd.num_vars()), (3, 2));
        assert!(satisfies(&pd, &ints(&[0, 0])));
        assert!(!satisfies(&pd, &ints(&[1, 0])));
    }

    #[test]
    fn corpus_lookup() {
        assert_eq!(
            lookup("example_3_1").unwrap(),
            Problem::System(example_3_1())
        );
        assert_eq!(
            lookup("klee_minty_4").unwrap(),
            Problem::Program(klee_minty(4).unwrap())
        );
        let Problem::Program(lp) = lookup("example_3_2_lp").unwrap() else {
            panic!("expected a program")
        };
        assert_eq!(lp.c(), &ints(&[-2, -3, 1, 12])[..]);
        assert_eq!(lp.system().b(), &ints(&[0, 0, 18])[..]);
        assert_eq!(lp.system().a()[1][0], -rational(1, 3).unwrap());
        assert!(matches!(lookup("nope"), Err(ModelError::UnknownCorpus(_))));
    }

    #[test]
    fn thresholds_must_increase() {
        assert!(ThresholdSpec::new(ints(&[500, 600, 700])).is_ok());
        assert_eq!(
            ThresholdSpec::new(ints(&[600, 500])),
            Err(ModelError::BadThresholds)
        );
        assert_eq!(
            ThresholdSpec::new(ints(&[5, 5])),
            Err(ModelError::BadThresholds)
        );
        assert_eq!(
            ThresholdSpec::<Rational>::new(vec![]),
            Err(ModelError::BadThresholds)
        );
    }

    proptest! {
        #[test]
        fn scale_row_preserves_feasible_set(
            a in prop::collection::vec(prop::collection::vec(-5i64..5, 3), 1..4),
            b_seed in prop::collection::vec(-5i64..5, 4),
            x in prop::collection::vec(0i64..4, 3),
            factor in 1i64..6,
            den in 1i64..4,
            row in 0usize..4,
        ) {
            let m = a.len();
            let s = InequalitySystem::new(
                a.iter().map(|r| ints(r)).collect(),
                ints(&b_seed[..m]),
                3,
            ).unwrap();
            let scaled = s.scale_row(row % m + 1, &rational(factor, den).unwrap()).unwrap();
            let x = ints(&x);
            prop_assert_eq!(satisfies(&s, &x), satisfies(&scaled, &x));
        }

        #[test]
        fn primal_dual_dimensions(n in 1usize..5, m in 0usize..5) {
            let lp = LinearProgram::new(
                vec![int(1); n],
                InequalitySystem::new(vec![vec![int(1); n]; m], vec![int(0); m], n).unwrap(),
            ).unwrap();
            let pd = lp.primal_dual_system();
            prop_assert_eq!(pd.num_rows(), m + n + 1);
            prop_assert_eq!(pd.num_vars(), n + m);
        }
    }
}
