//! Finitely presented groups and Felsch-style Todd–Coxeter coset enumeration
//! over the trivial subgroup. A completed enumeration is the regular
//! representation of the presented group, from which a full multiplication
//! table is rebuilt.

use std::collections::{HashSet, VecDeque};

use crate::group::{El, FiniteGroup, Group, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FpError {
    #[error("live coset count exceeded the bound {0}; the group may be infinite or the bound too small")]
    Overflow(usize),
    #[error("generator index {0} out of range for {1} generators")]
    BadGenerator(i32, usize),
    #[error("relator word contains a zero entry")]
    ZeroLetter,
    #[error("a presentation needs at least one generator")]
    NoGenerators,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A group presentation. Words are sequences of signed 1-based generator
/// indices: `+k` is generator `k`, `-k` its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub ngens: usize,
    pub relators: Vec<Vec<i32>>,
    pub generator_names: Option<Vec<String>>,
}

impl Presentation {
    pub fn new(ngens: usize, relators: Vec<Vec<i32>>) -> Result<Presentation, FpError> {
        let p = Presentation {
            ngens,
            relators,
            generator_names: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FpError> {
        if self.ngens == 0 {
            return Err(FpError::NoGenerators);
        }
        for w in &self.relators {
            for &l in w {
                if l == 0 {
                    return Err(FpError::ZeroLetter);
                }
                if l.unsigned_abs() as usize > self.ngens {
                    return Err(FpError::BadGenerator(l, self.ngens));
                }
            }
        }
        Ok(())
    }

    /// Free reduction of a word.
    pub fn reduce(word: &[i32]) -> Vec<i32> {
        let mut out: Vec<i32> = Vec::with_capacity(word.len());
        for &l in word {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }
}

const UNDEF: u32 = u32::MAX;

/// Completed or overflowed coset table. Columns come in pairs: column `2k`
/// is the action of generator `k`, column `2k+1` of its inverse.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub presentation: Presentation,
    pub table: Vec<Vec<u32>>,
    pub complete: bool,
    pub coset_count: usize,
}

impl CosetTable {
    #[inline]
    fn col(letter: i32) -> usize {
        let k = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            2 * k
        } else {
            2 * k + 1
        }
    }

    /// Image of a coset under a word; the table must be complete.
    pub fn trace(&self, start: u32, word: &[i32]) -> u32 {
        let mut c = start;
        for &l in word {
            c = self.table[c as usize][Self::col(l)];
        }
        c
    }

    /// Every relator acts trivially on every coset.
    pub fn relators_act_trivially(&self) -> bool {
        self.complete
            && self
                .presentation
                .relators
                .iter()
                .all(|r| (0..self.coset_count as u32).all(|c| self.trace(c, r) == c))
    }
}

/// Result of a completed enumeration: the group, the coset table, and the
/// data needed to evaluate words and extend maps off the generators.
#[derive(Debug, Clone)]
pub struct EnumeratedGroup {
    pub group: Group,
    pub coset_table: CosetTable,
    /// Image of each generator as a group element.
    pub generator_images: Vec<El>,
    /// For every non-identity element, a pair (earlier element, signed letter)
    /// with `element = earlier · letter`; the identity holds (0, 0).
    pub definitions: Vec<(El, i32)>,
}

impl EnumeratedGroup {
    /// Evaluate a word to a group element; the empty word is the identity.
    pub fn word_eval(&self, word: &[i32]) -> Result<El, FpError> {
        for &l in word {
            if l == 0 {
                return Err(FpError::ZeroLetter);
            }
            if l.unsigned_abs() as usize > self.coset_table.presentation.ngens {
                return Err(FpError::BadGenerator(
                    l,
                    self.coset_table.presentation.ngens,
                ));
            }
        }
        Ok(self.coset_table.trace(self.group.identity(), word))
    }

    /// Extend generator images in some group to the full element map, using
    /// the definition spine. The result is only a candidate: the caller
    /// decides whether it must be a homomorphism.
    pub fn extend_generator_map(&self, codomain: &Group, gen_images: &[El]) -> Vec<El> {
        assert_eq!(gen_images.len(), self.coset_table.presentation.ngens);
        let n = self.group.order();
        let mut map = vec![0u32; n as usize];
        map[self.group.identity() as usize] = codomain.identity();
        for x in 0..n {
            let (parent, letter) = self.definitions[x as usize];
            if letter == 0 {
                continue;
            }
            let g = gen_images[letter.unsigned_abs() as usize - 1];
            let g = if letter > 0 { g } else { codomain.inv(g) };
            map[x as usize] = codomain.mul(map[parent as usize], g);
        }
        map
    }

    /// Check that every relator maps to the identity under the given
    /// generator images; returns the index of the first failing relator.
    pub fn relators_hold_under(&self, codomain: &Group, gen_images: &[El]) -> Result<(), usize> {
        for (i, r) in self.coset_table.presentation.relators.iter().enumerate() {
            let mut acc = codomain.identity();
            for &l in r {
                let g = gen_images[l.unsigned_abs() as usize - 1];
                let g = if l > 0 { g } else { codomain.inv(g) };
                acc = codomain.mul(acc, g);
            }
            if acc != codomain.identity() {
                return Err(i);
            }
        }
        Ok(())
    }
}

/// Preprocessed relators: column sequences plus, per column, the positions
/// at which that column occurs.
struct Relators {
    cols: Vec<Vec<usize>>,
    at: Vec<Vec<(usize, usize)>>,
}

impl Relators {
    fn new(p: &Presentation) -> Relators {
        let ncols = 2 * p.ngens;
        let mut cols: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for r in &p.relators {
            let r = Presentation::reduce(r);
            if r.is_empty() {
                continue;
            }
            let cs: Vec<usize> = r.iter().map(|&l| CosetTable::col(l)).collect();
            if seen.insert(cs.clone()) {
                cols.push(cs);
            }
        }
        let mut at = vec![Vec::new(); ncols];
        for (ri, cs) in cols.iter().enumerate() {
            for (off, &c) in cs.iter().enumerate() {
                at[c].push((ri, off));
            }
        }
        Relators { cols, at }
    }
}

/// Hard cap on the order of groups rebuilt as multiplication tables from a
/// completed enumeration; the table is quadratic in the order.
pub const TABLE_ORDER_CAP: u64 = 16384;

/// Felsch-style coset enumeration over the trivial subgroup. Deterministic:
/// cosets are defined at the first undefined table entry in row-major order,
/// and deductions and coincidences are processed immediately in FIFO order.
pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> Result<EnumeratedGroup, FpError> {
    todd_coxeter_capped(p, max_cosets, TABLE_ORDER_CAP)
}

/// As [`todd_coxeter`], but refusing to materialise the multiplication table
/// when the completed enumeration exceeds `order_cap`.
pub fn todd_coxeter_capped(
    p: &Presentation,
    max_cosets: usize,
    order_cap: u64,
) -> Result<EnumeratedGroup, FpError> {
    p.validate()?;
    if max_cosets < 1 {
        return Err(FpError::Overflow(max_cosets));
    }
    let rels = Relators::new(p);
    let mut e = Enumerator {
        ncols: 2 * p.ngens,
        table: vec![vec![UNDEF; 2 * p.ngens]],
        rep: vec![0],
        dead: 0,
        max_cosets,
        deductions: VecDeque::new(),
        coincidences: VecDeque::new(),
        cursor: (0, 0),
    };
    e.run(&rels)?;
    let order = e.live() as u64;
    let cap = order_cap.min(TABLE_ORDER_CAP);
    if order > cap {
        return Err(FpError::Group(GroupError::TooLarge { order, bound: cap }));
    }
    e.into_group(p)
}

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<u32>>,
    rep: Vec<u32>,
    dead: usize,
    max_cosets: usize,
    deductions: VecDeque<(u32, usize)>,
    coincidences: VecDeque<(u32, u32)>,
    cursor: (usize, usize),
}

impl Enumerator {
    #[inline]
    fn inv_col(c: usize) -> usize {
        c ^ 1
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.rep[x as usize] != x {
            let up = self.rep[self.rep[x as usize] as usize];
            self.rep[x as usize] = up;
            x = up;
        }
        x
    }

    fn live(&self) -> usize {
        self.table.len() - self.dead
    }

    /// Record `a · col = b` together with the inverse entry, queueing work.
    fn deduce(&mut self, a: u32, col: usize, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        let cur = self.table[a as usize][col];
        if cur != UNDEF {
            let cur = self.find(cur);
            if cur != b {
                self.coincidences.push_back((cur, b));
            }
            return;
        }
        self.table[a as usize][col] = b;
        self.deductions.push_back((a, col));
        let icol = Self::inv_col(col);
        let back = self.table[b as usize][icol];
        if back != UNDEF {
            let back = self.find(back);
            if back != a {
                self.coincidences.push_back((back, a));
            }
        } else {
            self.table[b as usize][icol] = a;
            self.deductions.push_back((b, icol));
        }
    }

    fn merge(&mut self, x: u32, y: u32) {
        let (x, y) = (self.find(x), self.find(y));
        if x == y {
            return;
        }
        let (keep, drop) = if x < y { (x, y) } else { (y, x) };
        self.rep[drop as usize] = keep;
        self.dead += 1;
        for col in 0..self.ncols {
            let v = self.table[drop as usize][col];
            if v == UNDEF {
                continue;
            }
            let v = self.find(v);
            let cur = self.table[keep as usize][col];
            if cur == UNDEF {
                self.table[keep as usize][col] = v;
                let icol = Self::inv_col(col);
                let back = self.table[v as usize][icol];
                if back == UNDEF {
                    self.table[v as usize][icol] = keep;
                    self.deductions.push_back((v, icol));
                } else {
                    let back = self.find(back);
                    if back != keep {
                        self.coincidences.push_back((back, keep));
                    }
                }
            } else {
                let cur = self.find(cur);
                if cur != v {
                    self.coincidences.push_back((cur, v));
                }
            }
        }
        // every relator cycle through the surviving coset may carry new
        // information now, so rescan all of its defined entries
        for col in 0..self.ncols {
            if self.table[keep as usize][col] != UNDEF {
                self.deductions.push_back((keep, col));
            }
        }
    }

    fn process_queues(&mut self, rels: &Relators) {
        loop {
            if let Some((x, y)) = self.coincidences.pop_front() {
                self.merge(x, y);
                continue;
            }
            if let Some((a, col)) = self.deductions.pop_front() {
                let a = self.find(a);
                for &(ri, off) in &rels.at[col] {
                    self.scan(&rels.cols[ri], a, off);
                }
                continue;
            }
            break;
        }
    }

    /// Scan the cyclic relator `cols` rotated to start at `off` from coset
    /// `a`. Fills a single gap as a deduction; queues a coincidence when the
    /// scan closes with a mismatch.
    fn scan(&mut self, cols: &[usize], a: u32, off: usize) {
        let len = cols.len();
        let a = self.find(a);
        let mut fwd = a;
        let mut i = 0usize; // forward letters consumed
        while i < len {
            let v = self.table[fwd as usize][cols[(off + i) % len]];
            if v == UNDEF {
                break;
            }
            fwd = self.find(v);
            i += 1;
        }
        if i == len {
            if fwd != a {
                self.coincidences.push_back((fwd, a));
            }
            return;
        }
        let mut bwd = a;
        let mut j = len; // next backward letter is at j-1
        while j > i {
            let v = self.table[bwd as usize][Self::inv_col(cols[(off + j - 1) % len])];
            if v == UNDEF {
                break;
            }
            bwd = self.find(v);
            j -= 1;
        }
        if j == i {
            if fwd != bwd {
                self.coincidences.push_back((fwd, bwd));
            }
        } else if j == i + 1 {
            self.deduce(fwd, cols[(off + i) % len], bwd);
        }
    }

    fn run(&mut self, rels: &Relators) -> Result<(), FpError> {
        loop {
            // first undefined entry in row-major order over live rows;
            // entries never become undefined again, so the cursor only moves
            let (mut row, mut col) = self.cursor;
            let mut found = None;
            while row < self.table.len() {
                if self.rep[row] != row as u32 {
                    row += 1;
                    col = 0;
                    continue;
                }
                while col < self.ncols {
                    if self.table[row][col] == UNDEF {
                        found = Some((row as u32, col));
                        break;
                    }
                    col += 1;
                }
                if found.is_some() {
                    break;
                }
                row += 1;
                col = 0;
            }
            self.cursor = (row, col);
            let Some((a, col)) = found else {
                return Ok(());
            };
            if self.live() + 1 > self.max_cosets {
                return Err(FpError::Overflow(self.max_cosets));
            }
            let b = self.table.len() as u32;
            self.table.push(vec![UNDEF; self.ncols]);
            self.rep.push(b);
            self.deduce(a, col, b);
            self.process_queues(rels);
        }
    }

    /// Renumber live cosets in BFS order from coset 0 and build the group.
    fn into_group(mut self, p: &Presentation) -> Result<EnumeratedGroup, FpError> {
        let total = self.table.len();
        for r in 0..total {
            if self.rep[r] != r as u32 {
                continue;
            }
            for c in 0..self.ncols {
                let v = self.table[r][c];
                debug_assert_ne!(v, UNDEF, "completed table has no holes");
                self.table[r][c] = self.find(v);
            }
        }
        let root = self.find(0);
        let mut new_index = vec![UNDEF; total];
        let mut bfs: Vec<u32> = vec![root];
        let mut definitions: Vec<(El, i32)> = vec![(0, 0)];
        new_index[root as usize] = 0;
        let mut head = 0;
        while head < bfs.len() {
            let coset = bfs[head];
            let here = head as u32;
            head += 1;
            for c in 0..self.ncols {
                let v = self.table[coset as usize][c];
                if new_index[v as usize] == UNDEF {
                    new_index[v as usize] = bfs.len() as u32;
                    bfs.push(v);
                    let gen = (c / 2 + 1) as i32;
                    definitions.push((here, if c % 2 == 0 { gen } else { -gen }));
                }
            }
        }
        let n = bfs.len();
        debug_assert_eq!(n, self.live());
        let mut compact = vec![vec![0u32; self.ncols]; n];
        for (new, &old) in bfs.iter().enumerate() {
            for c in 0..self.ncols {
                compact[new][c] = new_index[self.table[old as usize][c] as usize];
            }
        }
        let coset_table = CosetTable {
            presentation: p.clone(),
            table: compact,
            complete: true,
            coset_count: n,
        };
        if !coset_table.relators_act_trivially() {
            // cannot happen for a correct scan; promoted to a hard error so a
            // broken table is never silently returned
            return Err(FpError::Group(GroupError::MalformedTable(
                "completed coset table violates a relator".into(),
            )));
        }
        // multiplication via the definition spine: x·y = (x·parent(y))·letter(y)
        let nu = n as u32;
        let mut mul = vec![0u32; n * n];
        for x in 0..nu {
            mul[(x as usize) * n] = x;
            for y in 1..nu {
                let (parent, letter) = definitions[y as usize];
                let xp = mul[(x as usize) * n + parent as usize];
                mul[(x as usize) * n + y as usize] =
                    coset_table.table[xp as usize][CosetTable::col(letter)];
            }
        }
        let group = FiniteGroup::from_op(nu, None, |a, b| mul[a as usize * n + b as usize])?;
        let generator_images: Vec<El> = (1..=p.ngens as i32)
            .map(|g| coset_table.trace(0, &[g]))
            .collect();
        Ok(EnumeratedGroup {
            group,
            coset_table,
            generator_images,
            definitions,
        })
    }
}

/// Presentation of a Cayley-table group on all elements as generators, with
/// every product as a relator.
pub fn multiplication_table_presentation(g: &Group) -> Presentation {
    let n = g.order();
    let gen = |x: El| (x + 1) as i32;
    let mut relators = vec![vec![gen(g.identity())]];
    for a in 0..n {
        for b in 0..n {
            relators.push(vec![gen(a), gen(b), -gen(g.mul(a, b))]);
        }
    }
    Presentation {
        ngens: n as usize,
        relators,
        generator_names: None,
    }
}
