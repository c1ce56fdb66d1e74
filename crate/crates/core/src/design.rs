//! Combinatorial objects for end-to-end slicing: triple sets of
//! (core, access, service) mappings, their conjugate rectangular views,
//! hard-slicing predicates and the hard/soft four-way partition.
//!
//! Indices are 1-based throughout, matching the way components and services
//! are named (`c_1 .. c_{n_c}`). Hard components occupy the index prefixes
//! `[1, n_1]` (core) and `[1, n_2]` (access).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DesignError {
    #[error("invalid universe: {0}")]
    Universe(String),
    #[error("line {line}: expected three comma-separated positive integers, got {text:?}")]
    Parse { line: usize, text: String },
    #[error("line {line}: {what} index {value} outside [1, {max}]")]
    Range {
        line: usize,
        what: &'static str,
        value: u32,
        max: u32,
    },
}

/// Sizes of the service, access and core symbol sets plus the hard prefixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolUniverse {
    n_s: u32,
    n_a: u32,
    n_c: u32,
    n_1: u32,
    n_2: u32,
}

impl SymbolUniverse {
    /// Argument order is `(n_s, n_a, n_c, n_1, n_2)`.
    pub fn new(n_s: u32, n_a: u32, n_c: u32, n_1: u32, n_2: u32) -> Result<Self, DesignError> {
        if n_1 == 0 || n_1 > n_c {
            return Err(DesignError::Universe(format!(
                "hard core count n1={n_1} must satisfy 1 <= n1 <= nc={n_c}"
            )));
        }
        if n_2 == 0 || n_2 > n_a {
            return Err(DesignError::Universe(format!(
                "hard access count n2={n_2} must satisfy 1 <= n2 <= na={n_a}"
            )));
        }
        Ok(Self {
            n_s,
            n_a,
            n_c,
            n_1,
            n_2,
        })
    }

    pub fn services(&self) -> u32 {
        self.n_s
    }
    pub fn access(&self) -> u32 {
        self.n_a
    }
    pub fn core(&self) -> u32 {
        self.n_c
    }
    pub fn hard_core(&self) -> u32 {
        self.n_1
    }
    pub fn hard_access(&self) -> u32 {
        self.n_2
    }

    pub fn is_hard_core(&self, c: u32) -> bool {
        (1..=self.n_1).contains(&c)
    }
    pub fn is_hard_access(&self, a: u32) -> bool {
        (1..=self.n_2).contains(&a)
    }

    fn bound(&self, coord: Coord) -> u32 {
        match coord {
            Coord::Service => self.n_s,
            Coord::Access => self.n_a,
            Coord::Core => self.n_c,
        }
    }

    pub fn contains(&self, t: &SliceTriple) -> bool {
        (1..=self.n_c).contains(&t.core)
            && (1..=self.n_a).contains(&t.access)
            && (1..=self.n_s).contains(&t.service)
    }
}

/// One end-to-end slice mapping: a service served by one access and one core component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceTriple {
    pub core: u32,
    pub access: u32,
    pub service: u32,
}

impl SliceTriple {
    pub fn new(core: u32, access: u32, service: u32) -> Self {
        Self {
            core,
            access,
            service,
        }
    }

    fn get(&self, coord: Coord) -> u32 {
        match coord {
            Coord::Service => self.service,
            Coord::Access => self.access,
            Coord::Core => self.core,
        }
    }
}

impl fmt::Display for SliceTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c{},a{},s{})", self.core, self.access, self.service)
    }
}

/// A duplicate-free set of slice triples over a fixed universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSet {
    universe: SymbolUniverse,
    triples: BTreeSet<SliceTriple>,
}

impl TripleSet {
    pub fn empty(universe: SymbolUniverse) -> Self {
        Self {
            universe,
            triples: BTreeSet::new(),
        }
    }

    /// Builds a set from triples, collapsing duplicates. Out-of-range triples are rejected.
    pub fn from_triples<I>(universe: SymbolUniverse, triples: I) -> Result<Self, DesignError>
    where
        I: IntoIterator<Item = SliceTriple>,
    {
        let mut set = Self::empty(universe);
        for (i, t) in triples.into_iter().enumerate() {
            check_range(&universe, &t, i + 1)?;
            set.triples.insert(t);
        }
        Ok(set)
    }

    pub fn universe(&self) -> &SymbolUniverse {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SliceTriple> {
        self.triples.iter()
    }

    pub fn contains(&self, t: &SliceTriple) -> bool {
        self.triples.contains(t)
    }

    /// Returns a copy without `t`. Missing triples are ignored.
    pub fn without(&self, t: &SliceTriple) -> Self {
        let mut out = self.clone();
        out.triples.remove(t);
        out
    }
}

fn check_range(u: &SymbolUniverse, t: &SliceTriple, line: usize) -> Result<(), DesignError> {
    for (what, value, max) in [
        ("core", t.core, u.n_c),
        ("access", t.access, u.n_a),
        ("service", t.service, u.n_s),
    ] {
        if value == 0 || value > max {
            return Err(DesignError::Range {
                line,
                what,
                value,
                max,
            });
        }
    }
    Ok(())
}

/// Parses a triples document: one `core,access,service` line per triple,
/// `#` comments and blank lines ignored.
pub fn parse_triples(text: &str, universe: SymbolUniverse) -> Result<TripleSet, DesignError> {
    let mut set = TripleSet::empty(universe);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let parsed: Option<Vec<u32>> = if fields.len() == 3 {
            fields.iter().map(|f| f.parse::<u32>().ok()).collect()
        } else {
            None
        };
        let Some(v) = parsed else {
            return Err(DesignError::Parse {
                line,
                text: raw.to_string(),
            });
        };
        let t = SliceTriple::new(v[0], v[1], v[2]);
        check_range(&universe, &t, line)?;
        set.triples.insert(t);
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coord {
    Service,
    Access,
    Core,
}

impl Coord {
    fn letter(self) -> char {
        match self {
            Coord::Service => 'S',
            Coord::Access => 'A',
            Coord::Core => 'C',
        }
    }
}

/// The three (row, column, entry) role assignments used for slicing tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conjugate {
    /// Services as rows, access components as columns, core components as entries.
    Sac,
    /// Services as rows, core components as columns, access components as entries.
    Sca,
    /// Core components as rows, access components as columns, services as entries.
    Cas,
}

impl Conjugate {
    pub const ALL: [Conjugate; 3] = [Conjugate::Sac, Conjugate::Sca, Conjugate::Cas];

    fn roles(self) -> (Coord, Coord, Coord) {
        match self {
            Conjugate::Sac => (Coord::Service, Coord::Access, Coord::Core),
            Conjugate::Sca => (Coord::Service, Coord::Core, Coord::Access),
            Conjugate::Cas => (Coord::Core, Coord::Access, Coord::Service),
        }
    }

    fn assemble(self, row: u32, col: u32, entry: u32) -> SliceTriple {
        match self {
            Conjugate::Sac => SliceTriple::new(entry, col, row),
            Conjugate::Sca => SliceTriple::new(col, entry, row),
            Conjugate::Cas => SliceTriple::new(row, col, entry),
        }
    }
}

impl fmt::Display for Conjugate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, c, e) = self.roles();
        write!(f, "({},{},{})", r.letter(), c.letter(), e.letter())
    }
}

/// A rectangular array view of (part of) a triple set. Cells hold a sorted
/// multiset of entry symbols; an absent key is a blank cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectView {
    conjugate: Conjugate,
    universe: SymbolUniverse,
    rows: Range<u32>,
    cols: Range<u32>,
    cells: BTreeMap<(u32, u32), Vec<u32>>,
}

impl RectView {
    /// Builds a view directly from cell contents. Used for hand-written
    /// arrays such as a standalone Latin rectangle.
    pub fn from_cells<I>(
        conjugate: Conjugate,
        universe: SymbolUniverse,
        rows: Range<u32>,
        cols: Range<u32>,
        cells: I,
    ) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), u32)>,
    {
        let mut view = Self {
            conjugate,
            universe,
            rows,
            cols,
            cells: BTreeMap::new(),
        };
        for ((r, c), e) in cells {
            view.insert(r, c, e);
        }
        view
    }

    fn insert(&mut self, row: u32, col: u32, entry: u32) {
        let cell = self.cells.entry((row, col)).or_default();
        let pos = cell.partition_point(|&x| x <= entry);
        cell.insert(pos, entry);
    }

    pub fn conjugate(&self) -> Conjugate {
        self.conjugate
    }
    pub fn rows(&self) -> Range<u32> {
        self.rows.clone()
    }
    pub fn cols(&self) -> Range<u32> {
        self.cols.clone()
    }

    /// Entries of cell `(row, col)`; empty for a blank cell.
    pub fn cell(&self, row: u32, col: u32) -> &[u32] {
        self.cells.get(&(row, col)).map_or(&[], Vec::as_slice)
    }

    /// Non-blank cells in row-major order.
    pub fn filled(&self) -> impl Iterator<Item = ((u32, u32), &[u32])> {
        self.cells.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// Total number of entries over all cells.
    pub fn entry_count(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    /// Reassembles the triples this view was built from.
    pub fn flatten(&self) -> TripleSet {
        let mut set = TripleSet::empty(self.universe);
        for (&(r, c), entries) in &self.cells {
            for &e in entries {
                set.triples.insert(self.conjugate.assemble(r, c, e));
            }
        }
        set
    }

    fn restrict(&self, rows: Range<u32>, cols: Range<u32>) -> RectView {
        let cells = self
            .cells
            .iter()
            .filter(|((r, c), _)| rows.contains(r) && cols.contains(c))
            .map(|(&k, v)| (k, v.clone()))
            .collect();
        RectView {
            conjugate: self.conjugate,
            universe: self.universe,
            rows,
            cols,
            cells,
        }
    }
}

/// Lays out `t` as the rectangular array for the given conjugate.
pub fn conjugate_view(t: &TripleSet, conjugate: Conjugate) -> RectView {
    let (row, col, entry) = conjugate.roles();
    let u = t.universe;
    let mut view = RectView {
        conjugate,
        universe: u,
        rows: 1..u.bound(row) + 1,
        cols: 1..u.bound(col) + 1,
        cells: BTreeMap::new(),
    };
    for tr in &t.triples {
        view.insert(tr.get(row), tr.get(col), tr.get(entry));
    }
    view
}

/// True iff every cell holds at most one symbol and no symbol repeats in any row or column.
pub fn is_partial_latin(view: &RectView) -> bool {
    let mut in_row: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut in_col: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (&(r, c), entries) in &view.cells {
        if entries.len() > 1 {
            return false;
        }
        for &e in entries {
            if !in_row.insert((r, e)) || !in_col.insert((c, e)) {
                return false;
            }
        }
    }
    true
}

/// Which clause of a slicing condition a pair of triples breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// Equal service must mean distinct access and distinct core.
    SameService,
    /// Equal access must mean distinct service and distinct core.
    SameAccess,
    /// Equal core must mean distinct service and distinct access.
    SameCore,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::SameService => "same service requires distinct access and core",
            Clause::SameAccess => "same access requires distinct service and core",
            Clause::SameCore => "same core requires distinct service and access",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fragment {
    R11,
    R12,
    R21,
    R22,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Line {
    Row(u32),
    Col(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Pair {
        first: SliceTriple,
        second: SliceTriple,
        clause: Clause,
    },
    Claim {
        claim: u8,
        fragment: Fragment,
        line: Line,
        entries: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Pair {
                first,
                second,
                clause,
            } => write!(f, "{first} vs {second}: {clause}"),
            Violation::Claim {
                claim,
                fragment,
                line,
                entries,
            } => {
                let (kind, idx) = match line {
                    Line::Row(i) => ("row c", i),
                    Line::Col(j) => ("column a", j),
                };
                write!(
                    f,
                    "claim {claim}: {fragment:?} {kind}{idx} has {entries} entries (at most 1 allowed)"
                )
            }
        }
    }
}

/// Result of a predicate check: holds iff no violations were found.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    violations: Vec<Violation>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

fn pair_check(t: &TripleSet, clauses: &[(Clause, Coord)]) -> Verdict {
    let triples: Vec<&SliceTriple> = t.triples.iter().collect();
    let mut violations = Vec::new();
    for (i, x) in triples.iter().enumerate() {
        for y in &triples[i + 1..] {
            for &(clause, shared) in clauses {
                if x.get(shared) != y.get(shared) {
                    continue;
                }
                let others = [Coord::Service, Coord::Access, Coord::Core]
                    .into_iter()
                    .filter(|&c| c != shared);
                if others.into_iter().any(|c| x.get(c) == y.get(c)) {
                    violations.push(Violation::Pair {
                        first: **x,
                        second: **y,
                        clause,
                    });
                }
            }
        }
    }
    Verdict { violations }
}

/// Hard core slicing: pairs sharing a service or an access component must differ elsewhere.
pub fn check_hard_core(t: &TripleSet) -> Verdict {
    pair_check(
        t,
        &[
            (Clause::SameService, Coord::Service),
            (Clause::SameAccess, Coord::Access),
        ],
    )
}

/// Hard access slicing: pairs sharing a service or a core component must differ elsewhere.
pub fn check_hard_access(t: &TripleSet) -> Verdict {
    pair_check(
        t,
        &[
            (Clause::SameService, Coord::Service),
            (Clause::SameCore, Coord::Core),
        ],
    )
}

/// The (C,A,S) array split at the hard/soft boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub n_1: u32,
    pub n_2: u32,
    /// Hard core, hard access.
    pub r11: RectView,
    /// Hard core, soft access.
    pub r12: RectView,
    /// Soft core, hard access.
    pub r21: RectView,
    /// Soft core, soft access.
    pub r22: RectView,
}

impl Partition {
    pub fn fragments(&self) -> [(Fragment, &RectView); 4] {
        [
            (Fragment::R11, &self.r11),
            (Fragment::R12, &self.r12),
            (Fragment::R21, &self.r21),
            (Fragment::R22, &self.r22),
        ]
    }

    pub fn entry_count(&self) -> usize {
        self.fragments().iter().map(|(_, v)| v.entry_count()).sum()
    }
}

pub fn partition_cas(t: &TripleSet) -> Partition {
    let full = conjugate_view(t, Conjugate::Cas);
    let u = t.universe;
    let hard_rows = 1..u.n_1 + 1;
    let soft_rows = u.n_1 + 1..u.n_c + 1;
    let hard_cols = 1..u.n_2 + 1;
    let soft_cols = u.n_2 + 1..u.n_a + 1;
    Partition {
        n_1: u.n_1,
        n_2: u.n_2,
        r11: full.restrict(hard_rows.clone(), hard_cols.clone()),
        r12: full.restrict(hard_rows, soft_cols.clone()),
        r21: full.restrict(soft_rows.clone(), hard_cols),
        r22: full.restrict(soft_rows, soft_cols),
    }
}

fn line_loads(view: &RectView, by_row: bool) -> BTreeMap<u32, usize> {
    let mut loads = BTreeMap::new();
    for (&(r, c), entries) in &view.cells {
        *loads.entry(if by_row { r } else { c }).or_insert(0) += entries.len();
    }
    loads
}

fn claim_lines(
    view: &RectView,
    claim: u8,
    fragment: Fragment,
    by_row: bool,
    out: &mut Vec<Violation>,
) {
    for (idx, entries) in line_loads(view, by_row) {
        if entries > 1 {
            out.push(Violation::Claim {
                claim,
                fragment,
                line: if by_row { Line::Row(idx) } else { Line::Col(idx) },
                entries,
            });
        }
    }
}

/// Checks the line constraints of the four fragments. Entries are counted,
/// so a multivalued cell counts as more than one occupant of its row and column.
pub fn verify_partition_claims(p: &Partition) -> Verdict {
    let mut violations = Vec::new();
    claim_lines(&p.r11, 1, Fragment::R11, true, &mut violations);
    claim_lines(&p.r11, 1, Fragment::R11, false, &mut violations);
    claim_lines(&p.r12, 2, Fragment::R12, true, &mut violations);
    claim_lines(&p.r21, 3, Fragment::R21, false, &mut violations);
    // R22 is unconstrained.
    Verdict { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed_design() -> TripleSet {
        let u = SymbolUniverse::new(5, 6, 6, 3, 3).unwrap();
        // (s, a, c) in service-by-access order.
        let sac = [
            (1, 1, 1),
            (2, 2, 2),
            (2, 3, 3),
            (3, 3, 3),
            (3, 4, 4),
            (4, 4, 6),
            (4, 5, 5),
            (5, 6, 4),
        ];
        TripleSet::from_triples(u, sac.map(|(s, a, c)| SliceTriple::new(c, a, s))).unwrap()
    }

    #[test]
    fn parse_basic_and_duplicates() {
        let u = SymbolUniverse::new(5, 6, 6, 3, 3).unwrap();
        let t = parse_triples("1,1,1\n3,3,2", u).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.contains(&SliceTriple::new(1, 1, 1)));
        assert!(t.contains(&SliceTriple::new(3, 3, 2)));

        let t = parse_triples("1,1,1\n1,1,1", u).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn parse_errors() {
        let u = SymbolUniverse::new(5, 6, 6, 3, 3).unwrap();
        assert!(matches!(
            parse_triples("7,1,1", u),
            Err(DesignError::Range {
                line: 1,
                what: "core",
                ..
            })
        ));
        assert!(matches!(
            parse_triples("# header\n\n1,1\n", u),
            Err(DesignError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_triples("1,x,1", u),
            Err(DesignError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_triples("0,1,1", u),
            Err(DesignError::Range { .. })
        ));
    }

    #[test]
    fn universe_bounds() {
        assert!(SymbolUniverse::new(1, 5, 5, 0, 1).is_err());
        assert!(SymbolUniverse::new(1, 5, 5, 6, 1).is_err());
        assert!(SymbolUniverse::new(1, 5, 5, 5, 6).is_err());
        assert!(SymbolUniverse::new(1, 5, 5, 5, 5).is_ok());
    }

    #[test]
    fn hard_core_on_mixed_design() {
        let v = check_hard_core(&mixed_design());
        assert!(!v.holds());
        assert_eq!(
            v.violations(),
            &[Violation::Pair {
                first: SliceTriple::new(3, 3, 2),
                second: SliceTriple::new(3, 3, 3),
                clause: Clause::SameAccess,
            }]
        );
        let fixed = mixed_design().without(&SliceTriple::new(3, 3, 3));
        assert_eq!(fixed.len(), 7);
        assert!(check_hard_core(&fixed).holds());
        assert!(check_hard_core(&TripleSet::empty(*fixed.universe())).holds());
    }

    #[test]
    fn hard_access_on_mixed_design() {
        let v = check_hard_access(&mixed_design());
        assert!(!v.holds());
        let pairs: Vec<(SliceTriple, SliceTriple)> = v
            .violations()
            .iter()
            .map(|x| match x {
                Violation::Pair { first, second, .. } => (*first, *second),
                _ => unreachable!(),
            })
            .collect();
        assert!(pairs.contains(&(SliceTriple::new(3, 3, 2), SliceTriple::new(3, 3, 3))));
        // Sharing c4 across distinct services and distinct access components is allowed.
        assert!(!pairs.contains(&(SliceTriple::new(4, 4, 3), SliceTriple::new(4, 6, 5))));
        assert_eq!(pairs.len(), 1);

        let u = *mixed_design().universe();
        let one = TripleSet::from_triples(u, [SliceTriple::new(1, 1, 1)]).unwrap();
        assert!(check_hard_access(&one).holds());
        let two =
            TripleSet::from_triples(u, [SliceTriple::new(1, 1, 1), SliceTriple::new(2, 2, 2)])
                .unwrap();
        assert!(check_hard_access(&two).holds());
    }

    #[test]
    fn conjugate_tables() {
        let t = mixed_design();
        let cas = conjugate_view(&t, Conjugate::Cas);
        assert_eq!(cas.cell(3, 3), &[2, 3]);
        assert_eq!(cas.cell(4, 4), &[3]);
        assert_eq!(cas.cell(4, 6), &[5]);
        assert_eq!(cas.rows(), 1..7);
        let sca = conjugate_view(&t, Conjugate::Sca);
        assert_eq!(sca.cell(4, 6), &[4]);
        assert_eq!(sca.cell(5, 4), &[6]);
        let sac = conjugate_view(&t, Conjugate::Sac);
        assert_eq!(sac.cell(2, 3), &[3]);
        assert_eq!(sac.cell(1, 2), &[] as &[u32]);
        for o in Conjugate::ALL {
            assert_eq!(conjugate_view(&t, o).flatten(), t);
        }
        let empty = conjugate_view(&TripleSet::empty(*t.universe()), Conjugate::Sac);
        assert_eq!(empty.entry_count(), 0);
        assert_eq!(Conjugate::Cas.to_string(), "(C,A,S)");
    }

    #[test]
    fn partial_latin_examples() {
        let t = mixed_design();
        // c3 twice in column a3.
        assert!(!is_partial_latin(&conjugate_view(&t, Conjugate::Sac)));
        // Shared cell (c3, a3) holds two services.
        assert!(!is_partial_latin(&conjugate_view(&t, Conjugate::Cas)));

        let u = SymbolUniverse::new(5, 5, 5, 1, 1).unwrap();
        let single = RectView::from_cells(Conjugate::Sac, u, 1..2, 1..2, [((1, 1), 3)]);
        assert!(is_partial_latin(&single));
    }

    #[test]
    fn small_partial_rectangle() {
        let rows: [[u32; 5]; 4] = [
            [1, 0, 0, 0, 4],
            [0, 2, 3, 0, 0],
            [0, 0, 4, 0, 0],
            [5, 4, 0, 3, 1],
        ];
        let u = SymbolUniverse::new(5, 5, 5, 1, 1).unwrap();
        let cells = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(move |(c, &e)| ((r as u32 + 1, c as u32 + 1), e))
        });
        let view = RectView::from_cells(Conjugate::Sac, u, 1..5, 1..6, cells);
        assert!(is_partial_latin(&view));
    }

    #[test]
    fn relabelled_partition() {
        // Relabel so the hard sets become prefixes: c5 -> 3, a5 -> 3.
        let cmap = |c: u32| [0, 1, 2, 4, 5, 3, 6][c as usize];
        let amap = |a: u32| [0, 1, 2, 4, 5, 3, 6][a as usize];
        let src = mixed_design();
        let relabelled = TripleSet::from_triples(
            *src.universe(),
            src.iter()
                .map(|t| SliceTriple::new(cmap(t.core), amap(t.access), t.service)),
        )
        .unwrap();
        let p = partition_cas(&relabelled);
        assert_eq!(p.r11.cell(1, 1), &[1]);
        assert_eq!(p.r11.cell(2, 2), &[2]);
        assert_eq!(p.r11.cell(3, 3), &[4]);
        assert_eq!(p.r11.entry_count(), 3);
        assert_eq!(p.r12.entry_count(), 0);
        assert_eq!(p.r21.entry_count(), 0);
        assert_eq!(p.r22.cell(4, 4), &[2, 3]);
        assert_eq!(p.r22.cell(5, 5), &[3]);
        assert_eq!(p.r22.cell(5, 6), &[5]);
        assert_eq!(p.r22.cell(6, 5), &[4]);
        assert_eq!(p.entry_count(), relabelled.len());
        assert!(verify_partition_claims(&p).holds());
    }

    #[test]
    fn degenerate_partitions() {
        let u = SymbolUniverse::new(5, 6, 6, 6, 6).unwrap();
        let t = TripleSet::from_triples(u, mixed_design().iter().copied()).unwrap();
        let p = partition_cas(&t);
        assert_eq!(p.r11.entry_count(), t.len());
        assert!(p.r12.rows().len() == 6 && p.r12.cols().is_empty());
        assert_eq!(p.r12.entry_count() + p.r21.entry_count() + p.r22.entry_count(), 0);

        let p = partition_cas(&TripleSet::empty(u));
        assert_eq!(p.entry_count(), 0);
    }

    #[test]
    fn claim_violations() {
        let u = SymbolUniverse::new(5, 6, 6, 3, 3).unwrap();
        let t =
            TripleSet::from_triples(u, [SliceTriple::new(1, 1, 1), SliceTriple::new(1, 2, 2)])
                .unwrap();
        let v = verify_partition_claims(&partition_cas(&t));
        assert!(!v.holds());
        assert_eq!(
            v.violations(),
            &[Violation::Claim {
                claim: 1,
                fragment: Fragment::R11,
                line: Line::Row(1),
                entries: 2,
            }]
        );

        // Two hard cores on one soft access column: columns of R12 are free.
        let t =
            TripleSet::from_triples(u, [SliceTriple::new(1, 4, 1), SliceTriple::new(2, 4, 2)])
                .unwrap();
        assert!(verify_partition_claims(&partition_cas(&t)).holds());

        // Two entries in one R21 column.
        let t =
            TripleSet::from_triples(u, [SliceTriple::new(4, 1, 1), SliceTriple::new(5, 1, 2)])
                .unwrap();
        let v = verify_partition_claims(&partition_cas(&t));
        assert!(matches!(
            v.violations(),
            [Violation::Claim {
                claim: 3,
                line: Line::Col(1),
                ..
            }]
        ));

        // R22 accepts anything.
        let t = TripleSet::from_triples(
            u,
            [
                SliceTriple::new(4, 4, 1),
                SliceTriple::new(4, 4, 2),
                SliceTriple::new(4, 5, 3),
            ],
        )
        .unwrap();
        assert!(verify_partition_claims(&partition_cas(&t)).holds());
    }
}
