//! Canonical in-memory representation of cross-chain intents, solver
//! identities, and liquidity events.
//!
//! All downstream modules (ledger reconstruction, trigger detection, the
//! attack engine) consume these types. Records are immutable once validated
//! and safe to share across worker threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::money::MoneyUsd;

/// Chains observed in the traces, plus an open slot for anything else.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ChainId {
    Solana,
    Arbitrum,
    Ethereum,
    Base,
    Polygon,
    Bnb,
    Unichain,
    Optimism,
    Avalanche,
    Other(String),
}

impl ChainId {
    pub fn parse(label: &str) -> Result<ChainId, ValidationError> {
        let norm = label.trim().to_ascii_lowercase();
        Ok(match norm.as_str() {
            "" => return Err(ValidationError::UnknownChain(label.to_string())),
            "solana" => ChainId::Solana,
            "arbitrum" => ChainId::Arbitrum,
            "ethereum" => ChainId::Ethereum,
            "base" => ChainId::Base,
            "polygon" => ChainId::Polygon,
            "bnb" => ChainId::Bnb,
            "unichain" => ChainId::Unichain,
            "optimism" => ChainId::Optimism,
            "avalanche" => ChainId::Avalanche,
            _ => ChainId::Other(norm),
        })
    }

    pub fn as_str(&self) -> &str {
        match self {
            ChainId::Solana => "solana",
            ChainId::Arbitrum => "arbitrum",
            ChainId::Ethereum => "ethereum",
            ChainId::Base => "base",
            ChainId::Polygon => "polygon",
            ChainId::Bnb => "bnb",
            ChainId::Unichain => "unichain",
            ChainId::Optimism => "optimism",
            ChainId::Avalanche => "avalanche",
            ChainId::Other(s) => s,
        }
    }
}

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChainId {
    type Err = ValidationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChainId::parse(s)
    }
}

impl TryFrom<String> for ChainId {
    type Error = ValidationError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        ChainId::parse(&s)
    }
}

impl From<ChainId> for String {
    fn from(c: ChainId) -> String {
        c.as_str().to_string()
    }
}

/// How a bridge picks the winning solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverSelection {
    EnglishAuction,
    Fcfs,
}

/// Bridge protocol label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Bridge {
    Mayan,
    Across,
    Debridge,
    Other(String),
}

impl Bridge {
    pub fn parse(label: &str) -> Result<Bridge, ValidationError> {
        let norm = label.trim().to_ascii_lowercase();
        Ok(match norm.as_str() {
            "" => return Err(ValidationError::UnknownBridge(label.to_string())),
            "mayan" => Bridge::Mayan,
            "across" => Bridge::Across,
            "debridge" => Bridge::Debridge,
            _ => Bridge::Other(norm),
        })
    }

    pub fn as_str(&self) -> &str {
        match self {
            Bridge::Mayan => "mayan",
            Bridge::Across => "across",
            Bridge::Debridge => "debridge",
            Bridge::Other(s) => s,
        }
    }

    /// Mayan runs English auctions; Across and deBridge are first-come
    /// first-served. Unknown bridges default to FCFS (no bid costs assumed).
    pub fn solver_selection(&self) -> SolverSelection {
        match self {
            Bridge::Mayan => SolverSelection::EnglishAuction,
            _ => SolverSelection::Fcfs,
        }
    }
}

impl fmt::Display for Bridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Bridge {
    type Err = ValidationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Bridge::parse(s)
    }
}

impl TryFrom<String> for Bridge {
    type Error = ValidationError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Bridge::parse(&s)
    }
}

impl From<Bridge> for String {
    fn from(b: Bridge) -> String {
        b.as_str().to_string()
    }
}

/// A solver identity: case-normalized account address plus the chain it
/// fulfills on.
///
/// The same on-chain account appears under mixed casings in raw extracts;
/// normalization collapses those to one identity. The same address on two
/// different chains is two distinct solvers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolverId {
    pub address: String,
    pub chain: ChainId,
}

impl SolverId {
    /// Case-normalizes `address` and binds it to `chain`.
    pub fn normalize(address: &str, chain: ChainId) -> Result<SolverId, ValidationError> {
        let trimmed = address.trim();
        if trimmed.is_empty() {
            return Err(ValidationError::EmptyAddress);
        }
        Ok(SolverId {
            address: trimmed.to_ascii_lowercase(),
            chain,
        })
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.address, self.chain)
    }
}

/// One cross-chain intent with its derived economics.
///
/// `solver_profit_pct` and `protocol_fee_pct` are dimensionless fractions
/// (`0.01129` means 1.129%). The effective protocol fee for the intent is
/// `protocol_fee_pct * intent_value + protocol_fixed_fee`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentRecord {
    pub intent_id: String,
    pub bridge: Bridge,
    pub src_chain: ChainId,
    pub dst_chain: ChainId,
    /// Marks a legitimate same-chain swap; without it, equal source and
    /// destination chains are rejected.
    #[serde(default)]
    pub same_chain_swap: bool,
    /// The fulfiller: the `from` address of the destination transaction.
    pub solver: SolverId,
    /// Intent creation time, epoch seconds.
    pub created_at: u64,
    /// Fulfillment time; absent means the intent was never fulfilled.
    #[serde(default)]
    pub fulfilled_at: Option<u64>,
    /// Solver repayment time; absent while settlement is pending.
    #[serde(default)]
    pub refunded_at: Option<u64>,
    pub intent_value: MoneyUsd,
    /// Solver margin as a fraction of value; negative for loss-making fills.
    pub solver_profit_pct: Decimal,
    pub protocol_fee_pct: Decimal,
    pub protocol_fixed_fee: MoneyUsd,
    /// Destination-chain transaction fee paid to fulfill.
    pub fill_gas: MoneyUsd,
    /// Auction bidding cost; zero for FCFS bridges.
    pub auction_cost: MoneyUsd,
    pub dst_token: String,
    /// Pass-through of source columns not mapped above.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<BTreeMap<String, String>>,
}

impl IntentRecord {
    /// Effective protocol fee charged on this intent.
    pub fn protocol_fee(&self) -> MoneyUsd {
        self.intent_value.mul_rate(self.protocol_fee_pct) + self.protocol_fixed_fee
    }

    /// Solver revenue for fulfilling this intent: `V_i * p_i`.
    pub fn solver_revenue(&self) -> MoneyUsd {
        self.intent_value.mul_rate(self.solver_profit_pct)
    }
}

/// What a liquidity ledger entry represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Solver fronts capital to fill an intent; delta is negative.
    FulfillmentOutflow,
    /// Settlement repays the fronted capital plus margin; delta is positive.
    RefundInflow,
    /// Operator tops the balance up; delta is positive.
    ExternalInjection,
    /// Operator withdraws; delta is negative.
    ExternalWithdrawal,
}

impl EventKind {
    pub fn parse(label: &str) -> Result<EventKind, ValidationError> {
        match label.trim().to_ascii_lowercase().as_str() {
            "fulfillment_outflow" => Ok(EventKind::FulfillmentOutflow),
            "refund_inflow" => Ok(EventKind::RefundInflow),
            "external_injection" => Ok(EventKind::ExternalInjection),
            "external_withdrawal" => Ok(EventKind::ExternalWithdrawal),
            other => Err(ValidationError::UnknownEventKind(other.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::FulfillmentOutflow => "fulfillment_outflow",
            EventKind::RefundInflow => "refund_inflow",
            EventKind::ExternalInjection => "external_injection",
            EventKind::ExternalWithdrawal => "external_withdrawal",
        }
    }
}

/// A signed change to one solver's USD balance at one instant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiquidityEvent {
    pub solver: SolverId,
    pub at: u64,
    pub delta: MoneyUsd,
    pub kind: EventKind,
}

impl LiquidityEvent {
    /// Checks the delta sign against the event kind. Outflows and
    /// withdrawals must be negative; refunds and injections positive.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let ok = match self.kind {
            EventKind::FulfillmentOutflow | EventKind::ExternalWithdrawal => {
                self.delta.is_negative()
            }
            EventKind::RefundInflow | EventKind::ExternalInjection => self.delta.is_positive(),
        };
        if ok {
            Ok(())
        } else {
            Err(ValidationError::EventDeltaSign {
                kind: self.kind,
                delta: self.delta.amount(),
            })
        }
    }
}

/// Rejections produced while validating records and events.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("solver address is empty")]
    EmptyAddress,
    #[error("unknown chain label {0:?}")]
    UnknownChain(String),
    #[error("unknown bridge label {0:?}")]
    UnknownBridge(String),
    #[error("unknown liquidity event kind {0:?}")]
    UnknownEventKind(String),
    #[error("{field} must be non-negative, got {value}")]
    NegativeValue { field: &'static str, value: Decimal },
    #[error("{earlier_field} ({earlier}) is after {later_field} ({later})")]
    TimestampOrder {
        earlier_field: &'static str,
        earlier: u64,
        later_field: &'static str,
        later: u64,
    },
    #[error("duplicate intent id {0:?}")]
    DuplicateId(String),
    #[error("source and destination are both {0} but the record is not marked as a same-chain swap")]
    SameChainRoute(ChainId),
    #[error("{kind:?} event has delta {delta} with the wrong sign")]
    EventDeltaSign { kind: EventKind, delta: Decimal },
    #[error("intent id is empty")]
    EmptyIntentId,
}

/// Validates a single record against the type invariants and returns it
/// unchanged on success. Duplicate-id checking happens at set level via
/// [`RecordSetValidator`].
pub fn validate_record(record: IntentRecord) -> Result<IntentRecord, ValidationError> {
    if record.intent_id.trim().is_empty() {
        return Err(ValidationError::EmptyIntentId);
    }
    if record.src_chain == record.dst_chain && !record.same_chain_swap {
        return Err(ValidationError::SameChainRoute(record.src_chain.clone()));
    }
    if let ChainId::Other(label) = &record.src_chain {
        if label.is_empty() {
            return Err(ValidationError::UnknownChain(String::new()));
        }
    }
    if let ChainId::Other(label) = &record.dst_chain {
        if label.is_empty() {
            return Err(ValidationError::UnknownChain(String::new()));
        }
    }
    if let Some(fulfilled) = record.fulfilled_at {
        if record.created_at > fulfilled {
            return Err(ValidationError::TimestampOrder {
                earlier_field: "created_at",
                earlier: record.created_at,
                later_field: "fulfilled_at",
                later: fulfilled,
            });
        }
    }
    if let Some(refunded) = record.refunded_at {
        let (earlier_field, earlier) = match record.fulfilled_at {
            Some(fulfilled) => ("fulfilled_at", fulfilled),
            None => ("created_at", record.created_at),
        };
        if earlier > refunded {
            return Err(ValidationError::TimestampOrder {
                earlier_field,
                earlier,
                later_field: "refunded_at",
                later: refunded,
            });
        }
    }
    // Value and cost fields are non-negative; the profit margin may not be
    // (loss-making fills exist in real traces).
    for (field, value) in [
        ("intent_value", record.intent_value),
        ("protocol_fixed_fee", record.protocol_fixed_fee),
        ("fill_gas", record.fill_gas),
        ("auction_cost", record.auction_cost),
    ] {
        if value.is_negative() {
            return Err(ValidationError::NegativeValue {
                field,
                value: value.amount(),
            });
        }
    }
    Ok(record)
}

/// Tracks intent ids across a trace set so duplicates are rejected.
#[derive(Debug, Default)]
pub struct RecordSetValidator {
    seen: BTreeSet<String>,
}

impl RecordSetValidator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates the record and registers its id.
    pub fn validate(&mut self, record: IntentRecord) -> Result<IntentRecord, ValidationError> {
        let record = validate_record(record)?;
        if !self.seen.insert(record.intent_id.clone()) {
            return Err(ValidationError::DuplicateId(record.intent_id));
        }
        Ok(record)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rust_decimal_macros::dec;

    fn base_record() -> IntentRecord {
        IntentRecord {
            intent_id: "intent-1".into(),
            bridge: Bridge::Debridge,
            src_chain: ChainId::Solana,
            dst_chain: ChainId::Ethereum,
            same_chain_swap: false,
            solver: SolverId::normalize("0xABCDEF", ChainId::Ethereum).unwrap(),
            created_at: 1_748_736_000,
            fulfilled_at: Some(1_748_736_020),
            refunded_at: Some(1_748_737_009),
            intent_value: MoneyUsd::new(dec!(260.411)),
            solver_profit_pct: dec!(0.01129),
            protocol_fee_pct: dec!(0.013),
            protocol_fixed_fee: MoneyUsd::ZERO,
            fill_gas: MoneyUsd::new(dec!(1.0)),
            auction_cost: MoneyUsd::ZERO,
            dst_token: "USDC".into(),
            raw: None,
        }
    }

    #[test]
    fn rejects_fulfillment_before_creation() {
        let mut r = base_record();
        r.fulfilled_at = Some(r.created_at - 1);
        assert!(matches!(
            validate_record(r),
            Err(ValidationError::TimestampOrder { .. })
        ));
    }

    #[test]
    fn accepts_degenerate_zero_intent() {
        let mut r = base_record();
        r.intent_value = MoneyUsd::ZERO;
        r.solver_profit_pct = Decimal::ZERO;
        r.protocol_fee_pct = Decimal::ZERO;
        r.fill_gas = MoneyUsd::ZERO;
        assert!(validate_record(r).is_ok());
    }

    #[test]
    fn accepts_loss_making_fill_and_it_reaches_profit_sums() {
        let mut r = base_record();
        r.solver_profit_pct = dec!(-0.002);
        let validated = validate_record(r).expect("negative margin is legal");
        // The negative margin flows through to the revenue term.
        assert_eq!(validated.solver_revenue(), MoneyUsd::new(dec!(-0.520822)));
    }

    #[test]
    fn rejects_negative_intent_value() {
        let mut r = base_record();
        r.intent_value = MoneyUsd::new(dec!(-1));
        assert!(matches!(
            validate_record(r),
            Err(ValidationError::NegativeValue { field: "intent_value", .. })
        ));
    }

    #[test]
    fn rejects_same_chain_unless_marked_swap() {
        let mut r = base_record();
        r.src_chain = ChainId::Ethereum;
        assert!(matches!(
            validate_record(r.clone()),
            Err(ValidationError::SameChainRoute(_))
        ));
        r.same_chain_swap = true;
        assert!(validate_record(r).is_ok());
    }

    #[test]
    fn solver_normalization_collapses_casings() {
        let a = SolverId::normalize(
            "0xDfd122610A14Ac12D934898c02dBEc1f72708116",
            ChainId::Ethereum,
        )
        .unwrap();
        let b = SolverId::normalize(
            "0xdfd122610a14ac12d934898c02dbec1f72708116",
            ChainId::Ethereum,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn same_address_on_two_chains_is_two_solvers() {
        let eth = SolverId::normalize("0xabc", ChainId::Ethereum).unwrap();
        let arb = SolverId::normalize("0xabc", ChainId::Arbitrum).unwrap();
        assert_ne!(eth, arb);
    }

    #[test]
    fn empty_address_is_rejected() {
        assert_eq!(
            SolverId::normalize("   ", ChainId::Ethereum),
            Err(ValidationError::EmptyAddress)
        );
    }

    #[test]
    fn duplicate_ids_rejected_at_set_level() {
        let mut v = RecordSetValidator::new();
        assert!(v.validate(base_record()).is_ok());
        assert!(matches!(
            v.validate(base_record()),
            Err(ValidationError::DuplicateId(_))
        ));
    }

    #[test]
    fn event_sign_checks() {
        let solver = SolverId::normalize("0xabc", ChainId::Ethereum).unwrap();
        let outflow = LiquidityEvent {
            solver: solver.clone(),
            at: 10,
            delta: MoneyUsd::new(dec!(-100)),
            kind: EventKind::FulfillmentOutflow,
        };
        assert!(outflow.validate().is_ok());
        let bad = LiquidityEvent {
            solver,
            at: 10,
            delta: MoneyUsd::new(dec!(100)),
            kind: EventKind::FulfillmentOutflow,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn chain_parsing_is_case_insensitive_with_open_slot() {
        assert_eq!(ChainId::parse("Ethereum").unwrap(), ChainId::Ethereum);
        assert_eq!(ChainId::parse("BNB").unwrap(), ChainId::Bnb);
        assert_eq!(
            ChainId::parse("Monad").unwrap(),
            ChainId::Other("monad".into())
        );
        assert!(ChainId::parse("  ").is_err());
    }

    prop_compose! {
        fn arb_record()(
            id in "[a-z0-9]{8}",
            created in 1_700_000_000u64..1_800_000_000,
            fill_delay in prop::option::of(0u64..10_000),
            refund_delay in prop::option::of(0u64..100_000),
            value_micros in 0i64..10_000_000_000_000,
            profit_bp in -500i64..2_000,
            fee_bp in 0i64..200,
            gas_micros in 0i64..10_000_000,
            swap in any::<bool>(),
        ) -> IntentRecord {
            let fulfilled_at = fill_delay.map(|d| created + d);
            let refund_base = fulfilled_at.unwrap_or(created);
            IntentRecord {
                intent_id: id,
                bridge: Bridge::Mayan,
                src_chain: ChainId::Solana,
                dst_chain: if swap { ChainId::Solana } else { ChainId::Ethereum },
                same_chain_swap: swap,
                solver: SolverId::normalize("0xFEED", ChainId::Ethereum).unwrap(),
                created_at: created,
                fulfilled_at,
                refunded_at: refund_delay.map(|d| refund_base + d),
                intent_value: MoneyUsd::new(Decimal::new(value_micros, 6)),
                solver_profit_pct: Decimal::new(profit_bp, 4),
                protocol_fee_pct: Decimal::new(fee_bp, 4),
                protocol_fixed_fee: MoneyUsd::ZERO,
                fill_gas: MoneyUsd::new(Decimal::new(gas_micros, 6)),
                auction_cost: MoneyUsd::ZERO,
                dst_token: "USDC".into(),
                raw: None,
            }
        }
    }

    proptest! {
        // Valid records survive a serialize/parse round trip unchanged.
        #[test]
        fn round_trip(record in arb_record()) {
            let validated = validate_record(record).expect("generator emits valid records");
            let json = serde_json::to_string(&validated).unwrap();
            let back: IntentRecord = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(validated, back);
        }
    }
}
