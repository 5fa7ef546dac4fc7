//! Brute-force enumeration oracles.
//!
//! Every family here is generated object by object and tallied; nothing is
//! computed from a formula. Each operation has a hard size cap, and going
//! over it is an error. `DEBELL_MAX_ENUM` in the environment replaces every
//! cap when an [`Enumerator`] is built with [`Enumerator::from_env`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Int;

pub const MAX_ENUM_ENV: &str = "DEBELL_MAX_ENUM";

/// A set partition of `[n]` with blocks listed by increasing minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    /// Validates and normalizes: each block sorted, blocks ordered by minimum.
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e == 0 || e > n || seen[e] {
                    return Err(Error::InvalidArgument(format!("blocks do not cover [{n}] exactly")));
                }
                seen[e] = true;
            }
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { blocks })
    }

    fn from_rgs(rgs: &[usize], blocks: usize) -> Self {
        let mut out = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            out[b].push(i + 1);
        }
        Self { blocks: out }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

fn write_block(f: &mut impl fmt::Write, block: &[usize]) -> fmt::Result {
    f.write_char('{')?;
    for (i, e) in block.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{e}")?;
    }
    f.write_char('}')
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write_block(f, b)?;
        }
        Ok(())
    }
}

/// Visits every partition of `[n]` (restricted growth strings) whose first
/// `distinct` elements lie in distinct blocks, optionally with exactly `k` blocks.
pub fn for_each_partition(n: usize, distinct: usize, k: Option<usize>, visit: &mut dyn FnMut(&BlockPartition)) {
    fn go(
        i: usize,
        used: usize,
        rgs: &mut Vec<usize>,
        n: usize,
        k: Option<usize>,
        visit: &mut dyn FnMut(&BlockPartition),
    ) {
        if let Some(k) = k {
            if used > k || used + (n - i) < k {
                return;
            }
        }
        if i == n {
            visit(&BlockPartition::from_rgs(rgs, used));
            return;
        }
        for b in 0..=used {
            rgs.push(b);
            go(i + 1, used.max(b + 1), rgs, n, k, visit);
            rgs.pop();
        }
    }
    if distinct > n {
        return;
    }
    let mut rgs: Vec<usize> = (0..distinct).collect();
    go(distinct, distinct, &mut rgs, n, k, visit);
}

/// Advances `p` to the next permutation in lexicographic order.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&v| v > p[i]).expect("pivot has a successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Visits all permutations of `0..m` in lexicographic order.
pub fn for_each_permutation(m: usize, visit: &mut dyn FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        visit(&p);
        if !next_permutation(&mut p) {
            break;
        }
    }
}

/// No fixed point, and `0..r` in pairwise distinct cycles.
pub fn is_r_derangement(p: &[usize], r: usize) -> bool {
    if p.iter().enumerate().any(|(i, &v)| i == v) {
        return false;
    }
    let mut cycle = vec![usize::MAX; p.len()];
    for start in 0..p.len() {
        if cycle[start] != usize::MAX {
            continue;
        }
        let mut e = start;
        while cycle[e] == usize::MAX {
            cycle[e] = start;
            e = p[e];
        }
    }
    let mut marks: Vec<usize> = cycle[..r.min(p.len())].to_vec();
    marks.sort_unstable();
    marks.windows(2).all(|w| w[0] != w[1])
}

/// Cycle notation, cycles ordered by their minimum: `(1,2)(3,4)`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        out.push('(');
        let mut e = start;
        let mut first = true;
        while !seen[e] {
            seen[e] = true;
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&(e + 1).to_string());
            e = p[e];
        }
        out.push(')');
    }
    out
}

/// The enumerable families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SetPartitions,
    RStirling,
    OrderedPartitions,
    Barred,
    RDerangements,
    RDerangedPartitions,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Self::SetPartitions,
        Self::RStirling,
        Self::OrderedPartitions,
        Self::Barred,
        Self::RDerangements,
        Self::RDerangedPartitions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SetPartitions => "set-partitions",
            Self::RStirling => "r-stirling",
            Self::OrderedPartitions => "ordered-partitions",
            Self::Barred => "barred",
            Self::RDerangements => "r-derangements",
            Self::RDerangedPartitions => "r-deranged-partitions",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{s}`")))
    }
}

/// Parameters of one enumeration. Which fields matter depends on the family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumQuery {
    pub n: usize,
    pub k: Option<usize>,
    pub r: usize,
    pub lambda: usize,
}

impl fmt::Display for EnumQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(f, " r={} lambda={}", self.r, self.lambda)
    }
}

/// One tallied enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementTally {
    pub family: Family,
    pub query: EnumQuery,
    pub count: Int,
}

/// Per-family size caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumLimits {
    /// Bound on `n`.
    pub set_partitions: usize,
    /// Bound on `n + r`.
    pub r_stirling: usize,
    /// Bound on `n` for ordered and barred arrangements.
    pub ordered: usize,
    /// Bound on `k + r`.
    pub r_derangements: usize,
    /// Bound on `n + r`.
    pub r_deranged_partitions: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self {
            set_partitions: 10,
            r_stirling: 10,
            ordered: 9,
            r_derangements: 9,
            r_deranged_partitions: 8,
        }
    }
}

impl EnumLimits {
    pub fn uniform(cap: usize) -> Self {
        Self {
            set_partitions: cap,
            r_stirling: cap,
            ordered: cap,
            r_derangements: cap,
            r_deranged_partitions: cap,
        }
    }
}

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::SizeCapExceeded { what, size, cap });
    }
    Ok(())
}

/// Entry point for all oracles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Enumerator {
    pub limits: EnumLimits,
}

impl Enumerator {
    pub fn new(limits: EnumLimits) -> Self {
        Self { limits }
    }

    /// Default caps, replaced wholesale by `DEBELL_MAX_ENUM` when it parses.
    pub fn from_env() -> Self {
        match std::env::var(MAX_ENUM_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            Some(cap) => Self::new(EnumLimits::uniform(cap)),
            None => Self::default(),
        }
    }

    fn check(&self, family: Family, q: &EnumQuery) -> Result<()> {
        let l = &self.limits;
        match family {
            Family::SetPartitions => check_cap("set partitions", q.n, l.set_partitions),
            Family::RStirling => check_cap("r-Stirling partitions", q.n + q.r, l.r_stirling),
            Family::OrderedPartitions | Family::Barred => check_cap("ordered partitions", q.n, l.ordered),
            Family::RDerangements => {
                let k =
                    q.k.ok_or_else(|| Error::InvalidArgument("r-derangements need k".into()))?;
                check_cap("r-derangements", k + q.r, l.r_derangements)
            }
            Family::RDerangedPartitions => check_cap("r-deranged partitions", q.n + q.r, l.r_deranged_partitions),
        }
    }

    /// Generates every arrangement of `family` at `query`, passing each
    /// canonical text form to `visit` when `render` is set (and `""` otherwise).
    fn walk(&self, family: Family, q: &EnumQuery, render: bool, visit: &mut dyn FnMut(&str)) -> Result<()> {
        self.check(family, q)?;
        let mut text = String::new();
        match family {
            Family::SetPartitions => for_each_partition(q.n, 0, q.k, &mut |p| {
                if render {
                    text = p.to_string();
                }
                visit(&text);
            }),
            Family::RStirling => {
                let blocks = q.k.map(|k| k + q.r);
                for_each_partition(q.n + q.r, q.r, blocks, &mut |p| {
                    if render {
                        text = p.to_string();
                    }
                    visit(&text);
                })
            }
            Family::OrderedPartitions | Family::Barred => {
                let bars = match family {
                    Family::Barred if q.lambda == 0 => {
                        return Err(Error::InvalidArgument("barred arrangements need lambda >= 1".into()))
                    }
                    Family::Barred => q.lambda - 1,
                    _ => 0,
                };
                for_each_partition(q.n, 0, None, &mut |p| {
                    for_each_permutation(p.num_blocks(), &mut |order| {
                        for_each_bar_placement(order.len(), bars, &mut |cuts| {
                            if render {
                                text.clear();
                                render_barred(&mut text, p.blocks(), order, cuts);
                            }
                            visit(&text);
                        })
                    })
                })
            }
            Family::RDerangements => {
                let k = q.k.expect("checked above");
                for_each_permutation(k + q.r, &mut |perm| {
                    if is_r_derangement(perm, q.r) {
                        if render {
                            text = cycle_notation(perm);
                        }
                        visit(&text);
                    }
                })
            }
            Family::RDerangedPartitions => for_each_partition(q.n + q.r, q.r, None, &mut |p| {
                for_each_permutation(p.num_blocks(), &mut |perm| {
                    if is_r_derangement(perm, q.r) {
                        if render {
                            text.clear();
                            render_barred(&mut text, p.blocks(), perm, &[]);
                        }
                        visit(&text);
                    }
                })
            }),
        }
        Ok(())
    }

    fn count(&self, family: Family, q: &EnumQuery) -> Result<Int> {
        let mut count: u64 = 0;
        self.walk(family, q, false, &mut |_| count += 1)?;
        Ok(Int::from(count))
    }

    /// Canonical text of every arrangement, in generation order.
    pub fn list(&self, family: Family, q: &EnumQuery) -> Result<Vec<String>> {
        let mut out = Vec::new();
        self.walk(family, q, true, &mut |s| out.push(s.to_string()))?;
        Ok(out)
    }

    pub fn tally(&self, family: Family, q: &EnumQuery) -> Result<ArrangementTally> {
        let count = match family {
            Family::RDerangedPartitions => self.r_deranged_partitions_enum(q.n, q.r)?,
            _ => self.count(family, q)?,
        };
        Ok(ArrangementTally {
            family,
            query: *q,
            count,
        })
    }

    /// Partitions of `[n]` into exactly `k` blocks.
    pub fn set_partitions_count(&self, n: usize, k: usize) -> Result<Int> {
        self.count(
            Family::SetPartitions,
            &EnumQuery {
                n,
                k: Some(k),
                ..Default::default()
            },
        )
    }

    /// Partitions of `[n + r]` into `k + r` blocks with `1..=r` in distinct blocks.
    pub fn r_stirling_count(&self, n: usize, k: usize, r: usize) -> Result<Int> {
        self.count(
            Family::RStirling,
            &EnumQuery {
                n,
                k: Some(k),
                r,
                lambda: 0,
            },
        )
    }

    /// Ordered set partitions of `[n]`.
    pub fn ordered_partitions_count(&self, n: usize) -> Result<Int> {
        self.count(
            Family::OrderedPartitions,
            &EnumQuery {
                n,
                ..Default::default()
            },
        )
    }

    /// Ordered set partitions of `[n]` with `lambda - 1` identical bars inserted.
    pub fn barred_count(&self, n: usize, lambda: usize) -> Result<Int> {
        self.count(
            Family::Barred,
            &EnumQuery {
                n,
                lambda,
                ..Default::default()
            },
        )
    }

    /// Derangements of `[k + r]` with `1..=r` in distinct cycles.
    pub fn r_derangements_enum(&self, k: usize, r: usize) -> Result<Int> {
        self.count(
            Family::RDerangements,
            &EnumQuery {
                n: 0,
                k: Some(k),
                r,
                lambda: 0,
            },
        )
    }

    /// r-deranged partitions of `[n + r]`, counted directly and in factored
    /// form (r-Stirling count times r-derangement count per block number).
    /// The two tallies must agree.
    pub fn r_deranged_partitions_enum(&self, n: usize, r: usize) -> Result<Int> {
        let q = EnumQuery {
            n,
            k: None,
            r,
            lambda: 0,
        };
        let direct = self.count(Family::RDerangedPartitions, &q)?;
        let mut factored = Int::from(0);
        for i in 0..=n {
            let blocks = self.r_stirling_count(n, i, r)?;
            if blocks == Int::from(0) {
                continue;
            }
            factored += blocks * self.r_derangements_enum(i, r)?;
        }
        if direct != factored {
            return Err(Error::OracleDisagreement(format!(
                "r-deranged partitions n={n} r={r}: direct {direct}, factored {factored}"
            )));
        }
        Ok(direct)
    }
}

/// Visits every placement of `bars` identical bars into the `blocks + 1`
/// gaps of a row of blocks, as a weakly increasing list of gap indices.
fn for_each_bar_placement(blocks: usize, bars: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(from: usize, left: usize, blocks: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if left == 0 {
            visit(buf);
            return;
        }
        for gap in from..=blocks {
            buf.push(gap);
            go(gap, left - 1, blocks, buf, visit);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(bars);
    go(0, bars, blocks, &mut buf, visit);
}

fn render_barred(out: &mut String, blocks: &[Vec<usize>], order: &[usize], cuts: &[usize]) {
    let mut cut = cuts.iter().peekable();
    for (pos, &b) in order.iter().enumerate() {
        while cut.next_if(|&&c| c == pos).is_some() {
            out.push('|');
        }
        write_block(out, &blocks[b]).expect("writing to a String");
    }
    for _ in cut {
        out.push('|');
    }
}
