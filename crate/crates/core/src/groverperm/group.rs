//! Finite groups given by Cayley tables.

use crate::error::{QError, Result};

/// Multiplication table of a finite group: `cayley[g][h]` is the index of
/// g·h.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(cayley: Vec<Vec<usize>>) -> Result<Self> {
        let n = cayley.len();
        if n == 0 {
            return Err(QError::InvalidGroup("empty table".into()));
        }
        for (g, row) in cayley.iter().enumerate() {
            if row.len() != n {
                return Err(QError::InvalidGroup(format!(
                    "row {g} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(QError::InvalidGroup(format!(
                    "entry {bad} out of range in row {g}"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| QError::InvalidGroup("no identity element".into()))?;
        let inverses = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| cayley[g][h] == identity && cayley[h][g] == identity)
                    .ok_or_else(|| QError::InvalidGroup(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                let ab = cayley[a][b];
                for c in 0..n {
                    if cayley[ab][c] != cayley[a][cayley[b][c]] {
                        return Err(QError::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            cayley,
            identity,
            inverses,
        })
    }

    /// Parses the text format: the order n on the first line, then n rows of
    /// n whitespace-separated product indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| QError::Parse("missing order line".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| QError::Parse(format!("bad order line {header:?}")))?;
        let mut cayley = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let row: std::result::Result<Vec<usize>, _> =
                line.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|e| QError::Parse(format!("row {i}: {e}")))?;
            cayley.push(row);
        }
        if cayley.len() != n {
            return Err(QError::Parse(format!(
                "expected {n} rows, found {}",
                cayley.len()
            )));
        }
        Self::new(cayley)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for row in &self.cayley {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Group of permutations under composition, (g·h)(x) = g(h(x)).
    pub fn from_permutations(elements: &[Vec<usize>]) -> Result<Self> {
        let index = |p: &Vec<usize>| elements.iter().position(|q| q == p);
        let mut cayley = Vec::with_capacity(elements.len());
        for g in elements {
            let mut row = Vec::with_capacity(elements.len());
            for h in elements {
                let gh: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                row.push(index(&gh).ok_or_else(|| {
                    QError::InvalidGroup("permutations not closed under composition".into())
                })?);
            }
            cayley.push(row);
        }
        Self::new(cayley)
    }

    /// Symmetric group on three points: identity, the transpositions
    /// (01), (02), (12), then the 3-cycles (012), (021).
    pub fn s3() -> Self {
        let elements = vec![
            vec![0, 1, 2],
            vec![1, 0, 2],
            vec![2, 1, 0],
            vec![0, 2, 1],
            vec![1, 2, 0],
            vec![2, 0, 1],
        ];
        Self::from_permutations(&elements).expect("S3")
    }

    /// Symmetries of a square acting on its corners: rotations r^k at
    /// indices 0..4, reflections r^k s at 4..8.
    pub fn d4() -> Self {
        let rot = |k: usize| -> Vec<usize> { (0..4).map(|x| (x + k) % 4).collect() };
        let refl = |k: usize| -> Vec<usize> { (0..4).map(|x| (k + 4 - x) % 4).collect() };
        let elements: Vec<Vec<usize>> = (0..4).map(rot).chain((0..4).map(refl)).collect();
        Self::from_permutations(&elements).expect("D4")
    }

    /// Cyclic group Z_n.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// h g h⁻¹.
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inverse(h))
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g >= self.order() {
            return Err(QError::InvalidArgument(format!(
                "element {g} out of range for group of order {}",
                self.order()
            )));
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}
