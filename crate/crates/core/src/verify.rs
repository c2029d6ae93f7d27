//! Checks each identity by computing both sides exactly for `n = 0..=n_max`.
//!
//! The integer families on the right-hand sides come from enumeration, never
//! from the identities themselves, so a passing report is real evidence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{binomial, binomial_signed, QBinomialTable};
use crate::chain::{for_each_chain_any_dimension, ChainSimplex};
use crate::error::{Error, Result};
use crate::lattice::{chain_weight_sum, region_gf, tally_first, tally_second, weight_sum_for_blocks};
use crate::numbers::{
    a_polynomials, b_polynomials, c_polynomials, eulerian_row_enum, lah_row_enum, lattice_count, lattice_gf,
    stirling2_row_closed, stirling2_row_enum, CMethod, EulerianRow, QPolyFamily, StirlingRow, StirlingVariant,
};
use crate::poly::QPolynomial;
use crate::shape::{compositions, MultisetShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `prod C(n+d_j, d_j) = sum_i <d,i> C(n-i+d, d)`
    Worpitzky,
    /// `prod [n+d_j, d_j] = sum_i A_{d,i} [n+i, d]`
    CarlitzQ,
    /// `prod C(n+d_j, d_j) = sum_k {d,k}_O C(n+1, k)`
    Stirling2,
    /// `prod [n+d_j, d_j] = sum_k B_{d,k} [n+1, k]` (claimed; fails)
    Stirling2Q,
    /// `multinomial C(n+d, d) = sum_k |d,k|_O C(n+1, k)`
    Lah,
    /// `multinomial [n+d, d] = sum_k C_{d,k} [n+1, k]` (claimed; fails)
    LahQ,
    /// `f1 = sum over chains of the exact chain-region weight`
    ChainQCorrected,
    DecompFirst,
    DecompSecond,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::Worpitzky,
        IdentityId::CarlitzQ,
        IdentityId::Stirling2,
        IdentityId::Stirling2Q,
        IdentityId::Lah,
        IdentityId::LahQ,
        IdentityId::ChainQCorrected,
        IdentityId::DecompFirst,
        IdentityId::DecompSecond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Worpitzky => "WORPITZKY",
            IdentityId::CarlitzQ => "CARLITZ_Q",
            IdentityId::Stirling2 => "STIRLING2",
            IdentityId::Stirling2Q => "STIRLING2_Q",
            IdentityId::Lah => "LAH",
            IdentityId::LahQ => "LAH_Q",
            IdentityId::ChainQCorrected => "CHAIN_Q_CORRECTED",
            IdentityId::DecompFirst => "DECOMP_FIRST",
            IdentityId::DecompSecond => "DECOMP_SECOND",
        }
    }

    /// Whether both sides are q-polynomials.
    pub fn is_q(self) -> bool {
        matches!(
            self,
            IdentityId::CarlitzQ | IdentityId::Stirling2Q | IdentityId::LahQ | IdentityId::ChainQCorrected
        )
    }

    /// Identities whose failure counts against the suite. The two claimed
    /// chain q-identities are contradicted by enumeration and only reported.
    pub fn expected_to_pass(self) -> bool {
        !matches!(self, IdentityId::Stirling2Q | IdentityId::LahQ)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// One side of an identity: an integer (decimal string on the wire) or a
/// q-polynomial (coefficient array).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Integer(BigInt),
    Poly(QPolynomial),
}

impl Value {
    pub fn at_q_equal_one(&self) -> BigInt {
        match self {
            Value::Integer(v) => v.clone(),
            Value::Poly(p) => p.eval_at_one(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(v) => write!(f, "{v}"),
            Value::Poly(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Integer(v) => s.serialize_str(&v.to_string()),
            Value::Poly(p) => p.serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRecord {
    pub n: u32,
    pub lhs: Value,
    pub rhs: Value,
    pub equal: bool,
}

impl IdentityRecord {
    fn new(n: u32, lhs: Value, rhs: Value) -> Self {
        let equal = lhs == rhs;
        IdentityRecord { n, lhs, rhs, equal }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The work budget ran out; `results` holds the completed prefix.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u32,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub shape: MultisetShape,
    pub expected: bool,
    pub results: Vec<IdentityRecord>,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
}

impl IdentityReport {
    fn from_records(
        identity: IdentityId,
        shape: &MultisetShape,
        results: Vec<IdentityRecord>,
        truncated: bool,
    ) -> Self {
        let counterexample = results.iter().find(|r| !r.equal).map(|r| Counterexample {
            n: r.n,
            lhs: r.lhs.clone(),
            rhs: r.rhs.clone(),
        });
        let status = if counterexample.is_some() {
            Status::Fail
        } else if truncated {
            Status::Truncated
        } else {
            Status::Pass
        };
        IdentityReport {
            identity,
            shape: shape.clone(),
            expected: identity.expected_to_pass(),
            results,
            status,
            counterexample,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The same report with every value evaluated at `q = 1`.
    pub fn at_q_equal_one(&self) -> IdentityReport {
        let results = self
            .results
            .iter()
            .map(|r| {
                IdentityRecord::new(
                    r.n,
                    Value::Integer(r.lhs.at_q_equal_one()),
                    Value::Integer(r.rhs.at_q_equal_one()),
                )
            })
            .collect();
        IdentityReport::from_records(self.identity, &self.shape, results, self.status == Status::Truncated)
    }

    /// One JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

/// Work units a single report may spend before it is cut short.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub Option<u64>);

impl Budget {
    pub const UNLIMITED: Budget = Budget(None);
    /// Roughly a few seconds of enumeration per report.
    pub const DEFAULT: Budget = Budget(Some(200_000_000));

    fn allows(self, spent: u64) -> bool {
        self.0.is_none_or(|limit| spent <= limit)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// Lazily computed families for one shape, shared by all its identity checks.
#[derive(Debug)]
pub struct ShapeContext {
    shape: MultisetShape,
    eulerian: OnceLock<EulerianRow>,
    stirling2: OnceLock<StirlingRow>,
    lah: OnceLock<StirlingRow>,
    a: OnceLock<QPolyFamily>,
    b: OnceLock<QPolyFamily>,
    c: OnceLock<QPolyFamily>,
    chain_blocks: OnceLock<BTreeMap<Vec<usize>, u64>>,
    chain_total: u64,
}

impl ShapeContext {
    pub fn new(shape: &MultisetShape) -> Result<Self> {
        shape.require_nonempty()?;
        Ok(ShapeContext {
            shape: shape.clone(),
            eulerian: OnceLock::new(),
            stirling2: OnceLock::new(),
            lah: OnceLock::new(),
            a: OnceLock::new(),
            b: OnceLock::new(),
            c: OnceLock::new(),
            chain_blocks: OnceLock::new(),
            chain_total: stirling2_row_closed(shape, StirlingVariant::Corrected)?
                .values
                .iter()
                .map(|v| v.to_u64().unwrap_or(u64::MAX))
                .fold(0u64, u64::saturating_add),
        })
    }

    pub fn shape(&self) -> &MultisetShape {
        &self.shape
    }

    // The shape was checked nonempty in `new`, so the unwraps below cannot fire.
    fn eulerian(&self) -> &EulerianRow {
        self.eulerian.get_or_init(|| eulerian_row_enum(&self.shape).unwrap())
    }

    fn stirling2(&self) -> &StirlingRow {
        self.stirling2.get_or_init(|| stirling2_row_enum(&self.shape).unwrap())
    }

    fn lah(&self) -> &StirlingRow {
        self.lah.get_or_init(|| lah_row_enum(&self.shape).unwrap())
    }

    fn a(&self) -> &QPolyFamily {
        self.a.get_or_init(|| a_polynomials(&self.shape).unwrap())
    }

    fn b(&self) -> &QPolyFamily {
        self.b.get_or_init(|| b_polynomials(&self.shape).unwrap())
    }

    fn c(&self) -> &QPolyFamily {
        self.c
            .get_or_init(|| c_polynomials(&self.shape, CMethod::Enumeration).unwrap())
    }

    /// Number of chain simplices for each block-size composition.
    fn chain_blocks(&self) -> &BTreeMap<Vec<usize>, u64> {
        self.chain_blocks.get_or_init(|| {
            let mut map = BTreeMap::new();
            for_each_chain_any_dimension(&self.shape, |vs| {
                let sizes = vs
                    .windows(2)
                    .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| (b - a) as usize).sum())
                    .collect();
                *map.entry(sizes).or_insert(0) += 1;
            });
            map
        })
    }

    fn multinomial_u64(&self) -> u64 {
        self.shape.multinomial().to_u64().unwrap_or(u64::MAX)
    }

    /// Deterministic work estimate for one record of `id` at dilation `n`.
    fn record_cost(&self, id: IdentityId, n: u32) -> u64 {
        let d = self.shape.size() as u64;
        let points = lattice_count(&self.shape, n as u64).to_u64().unwrap_or(u64::MAX);
        let cost = match id {
            IdentityId::DecompFirst | IdentityId::DecompSecond => points.saturating_mul(d),
            IdentityId::ChainQCorrected => (self.chain_blocks().len() as u64)
                .saturating_mul(d)
                .saturating_mul((n as u64 + 1).pow(2)),
            _ => d * d,
        };
        cost.max(1)
    }

    /// One-off cost of the enumerations an identity depends on.
    fn setup_cost(&self, id: IdentityId) -> u64 {
        let perms = self.multinomial_u64();
        match id {
            IdentityId::Worpitzky | IdentityId::CarlitzQ => perms,
            IdentityId::Stirling2 | IdentityId::Stirling2Q | IdentityId::ChainQCorrected => self.chain_total,
            IdentityId::Lah | IdentityId::LahQ => perms.saturating_mul(1u64 << (self.shape.size() - 1).min(62)),
            IdentityId::DecompFirst => perms,
            IdentityId::DecompSecond => self.chain_total,
        }
    }
}

fn int(v: BigInt) -> Value {
    Value::Integer(v)
}

fn poly(p: QPolynomial) -> Value {
    Value::Poly(p)
}

fn identity_record(ctx: &ShapeContext, id: IdentityId, n: u32, table: &QBinomialTable) -> IdentityRecord {
    let shape = &ctx.shape;
    let d = shape.size();
    let nn = n as i64;
    match id {
        IdentityId::Worpitzky => {
            let rhs: BigInt = (0..d)
                .map(|i| ctx.eulerian().get(i) * binomial_signed(nn - i as i64 + d as i64, d as i64))
                .sum();
            IdentityRecord::new(n, int(lattice_count(shape, n as u64)), int(rhs))
        }
        IdentityId::CarlitzQ => {
            let rhs: QPolynomial = (1..=d)
                .map(|i| &ctx.a().get(i) * &table.get(nn + i as i64, d as i64))
                .sum();
            IdentityRecord::new(n, poly(lattice_gf(shape, n as u64)), poly(rhs))
        }
        IdentityId::Stirling2 => {
            let rhs: BigInt = (1..=d)
                .map(|k| ctx.stirling2().get(k) * binomial(n as u64 + 1, k as u64))
                .sum();
            IdentityRecord::new(n, int(lattice_count(shape, n as u64)), int(rhs))
        }
        IdentityId::Stirling2Q => {
            let rhs: QPolynomial = (1..=d).map(|k| &ctx.b().get(k) * &table.get(nn + 1, k as i64)).sum();
            IdentityRecord::new(n, poly(lattice_gf(shape, n as u64)), poly(rhs))
        }
        IdentityId::Lah => {
            let lhs = shape.multinomial() * binomial(n as u64 + d as u64, d as u64);
            let rhs: BigInt = (1..=d)
                .map(|k| ctx.lah().get(k) * binomial(n as u64 + 1, k as u64))
                .sum();
            IdentityRecord::new(n, int(lhs), int(rhs))
        }
        IdentityId::LahQ => {
            let lhs = table.get(nn + d as i64, d as i64).scale(&shape.multinomial());
            let rhs: QPolynomial = (1..=d).map(|k| &ctx.c().get(k) * &table.get(nn + 1, k as i64)).sum();
            IdentityRecord::new(n, poly(lhs), poly(rhs))
        }
        IdentityId::ChainQCorrected => {
            let rhs: QPolynomial = ctx
                .chain_blocks()
                .iter()
                .map(|(blocks, &count)| weight_sum_for_blocks(blocks, n).scale(&BigInt::from(count)))
                .sum();
            IdentityRecord::new(n, poly(lattice_gf(shape, n as u64)), poly(rhs))
        }
        IdentityId::DecompFirst => decomposition_record(DecompositionKind::First, shape, n),
        IdentityId::DecompSecond => decomposition_record(DecompositionKind::Second, shape, n),
    }
}

/// Checks one identity for one shape at `n = 0..=n_max` with no work limit.
pub fn check_identity(id: IdentityId, shape: &MultisetShape, n_max: u32) -> Result<IdentityReport> {
    let ctx = ShapeContext::new(shape)?;
    Ok(check_identity_in(&ctx, id, n_max, Budget::UNLIMITED))
}

/// Checks one identity against a prepared shape context under a work budget.
pub fn check_identity_in(ctx: &ShapeContext, id: IdentityId, n_max: u32, budget: Budget) -> IdentityReport {
    let mut spent = ctx.setup_cost(id);
    let mut records = Vec::new();
    let mut truncated = !budget.allows(spent);
    if !truncated {
        let table = if id.is_q() {
            QBinomialTable::new(n_max as usize + ctx.shape.size() + 1)
        } else {
            QBinomialTable::new(0)
        };
        for n in 0..=n_max {
            spent = spent.saturating_add(ctx.record_cost(id, n));
            if !budget.allows(spent) {
                truncated = true;
                break;
            }
            records.push(identity_record(ctx, id, n, &table));
        }
    }
    IdentityReport::from_records(id, &ctx.shape, records, truncated)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    First,
    Second,
}

/// Classifies every lattice point of the `n`-th dilate and compares each
/// region with its closed count and generating function.
///
/// The record's `lhs` counts points whose assignment was confirmed: the point
/// satisfies its region's defining inequalities, and that region's observed
/// size and q-weight both equal the closed forms (`C(n - des + d, d)` and
/// `q^maj [n - des + d, d]_q` for permutations; `C(n+1, k)` and the exact
/// chain weight for chains). `rhs` is the total `prod C(n + d_j, d_j)`.
pub fn check_decomposition(kind: DecompositionKind, shape: &MultisetShape, n: u32) -> Result<IdentityReport> {
    shape.require_nonempty()?;
    let id = match kind {
        DecompositionKind::First => IdentityId::DecompFirst,
        DecompositionKind::Second => IdentityId::DecompSecond,
    };
    let record = decomposition_record(kind, shape, n);
    Ok(IdentityReport::from_records(id, shape, vec![record], false))
}

fn decomposition_record(kind: DecompositionKind, shape: &MultisetShape, n: u32) -> IdentityRecord {
    let d = shape.size() as i64;
    let expected_total = lattice_count(shape, n as u64);
    let mut confirmed: u64 = 0;
    match kind {
        DecompositionKind::First => {
            let (tally, _rejected) = tally_first(shape, n);
            for perm in crate::perm::enumerate_permutations(shape) {
                let size = tally.size(&perm.word().to_vec());
                let closed = binomial_signed(n as i64 - perm.descent_count() as i64 + d, d);
                let gf_ok = tally.gf(&perm.word().to_vec()) == region_gf(&perm, n);
                if BigInt::from(size) == closed && gf_ok {
                    confirmed += size;
                }
            }
        }
        DecompositionKind::Second => {
            let (tally, _rejected) = tally_second(shape, n);
            for_each_chain_any_dimension(shape, |vs| {
                let key = vs.to_vec();
                let size = tally.size(&key);
                let k = vs.len() as u64 - 1;
                let chain = ChainSimplex::from_vertices_unchecked(key.clone());
                let gf_ok = tally.gf(&key) == chain_weight_sum(&chain, n);
                if BigInt::from(size) == binomial(n as u64 + 1, k) && gf_ok {
                    confirmed += size;
                }
            });
        }
    }
    IdentityRecord::new(n, int(BigInt::from(confirmed)), int(expected_total))
}

/// Parameters of a verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub d_max: usize,
    pub l_max: usize,
    pub n_max: u32,
    pub include_q: bool,
    /// Restrict to these identities (all applicable ones when `None`).
    pub identities: Option<Vec<IdentityId>>,
    /// Explicit shapes instead of all compositions up to `d_max`.
    pub shapes: Option<Vec<MultisetShape>>,
    pub workers: usize,
    pub budget: Budget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            d_max: 4,
            l_max: 4,
            n_max: 6,
            include_q: false,
            identities: None,
            shapes: None,
            workers: 1,
            budget: Budget::DEFAULT,
        }
    }
}

impl SuiteConfig {
    pub fn identity_list(&self) -> Vec<IdentityId> {
        match &self.identities {
            Some(ids) => {
                let mut ids = ids.clone();
                ids.sort();
                ids.dedup();
                ids
            }
            None => IdentityId::ALL
                .into_iter()
                .filter(|id| self.include_q || !id.is_q())
                .collect(),
        }
    }

    pub fn shape_list(&self) -> Vec<MultisetShape> {
        match &self.shapes {
            Some(shapes) => shapes.clone(),
            None => compositions(self.d_max, self.l_max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub reports: Vec<IdentityReport>,
}

impl SuiteOutcome {
    /// Reports that were expected to pass but did not.
    pub fn unexpected_failures(&self) -> impl Iterator<Item = &IdentityReport> {
        self.reports.iter().filter(|r| r.expected && r.status == Status::Fail)
    }

    pub fn truncated(&self) -> bool {
        self.reports.iter().any(|r| r.status == Status::Truncated)
    }
}

/// Runs every selected identity over every selected shape.
///
/// Reports come back ordered by identity, then shape, regardless of the
/// worker count.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut reports = Vec::new();
    run_suite_streaming(config, |r| reports.push(r.clone()))?;
    Ok(SuiteOutcome { reports })
}

/// Like [`run_suite`], handing each report to `emit` in final order as soon
/// as its batch is done instead of collecting them.
pub fn run_suite_streaming(config: &SuiteConfig, mut emit: impl FnMut(&IdentityReport)) -> Result<()> {
    let shapes = config.shape_list();
    let contexts = shapes.iter().map(ShapeContext::new).collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(IdentityId, usize)> = config
        .identity_list()
        .into_iter()
        .flat_map(|id| (0..contexts.len()).map(move |s| (id, s)))
        .collect();
    let check = |&(id, s): &(IdentityId, usize)| check_identity_in(&contexts[s], id, config.n_max, config.budget);

    if config.workers <= 1 {
        for task in &tasks {
            emit(&check(task));
        }
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    for batch in tasks.chunks(config.workers * 4) {
        let reports: Vec<IdentityReport> = pool.install(|| batch.par_iter().map(check).collect());
        for r in &reports {
            emit(r);
        }
    }
    Ok(())
}

/// `q^maj(c) [n+1, k]_q`, the claimed weight of a chain region, for
/// comparison with [`chain_weight_sum`].
pub fn claimed_chain_gf(c: &ChainSimplex, n: u32) -> QPolynomial {
    crate::arith::q_binomial(n as u64 + 1, c.dimension() as u64).shift(c.major_index())
}
