//! Daily token price table and USD normalization.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use rust_decimal::Decimal;

use super::{open_file, IngestError};
use crate::money::MoneyUsd;

/// Prices keyed by `(token symbol, UTC date)`. Lookups outside the loaded
/// keys fail rather than extrapolate.
#[derive(Debug, Clone, Default)]
pub struct PriceTable {
    entries: HashMap<(String, NaiveDate), Decimal>,
}

impl PriceTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(
        &mut self,
        symbol: &str,
        date: NaiveDate,
        price: Decimal,
    ) -> Result<(), IngestError> {
        let symbol = symbol.trim().to_ascii_uppercase();
        if price <= Decimal::ZERO {
            return Err(IngestError::NonPositivePrice {
                symbol,
                date,
                price,
            });
        }
        if self.entries.contains_key(&(symbol.clone(), date)) {
            return Err(IngestError::DuplicatePriceKey { symbol, date });
        }
        self.entries.insert((symbol, date), price);
        Ok(())
    }

    pub fn lookup(&self, symbol: &str, date: NaiveDate) -> Result<Decimal, IngestError> {
        let symbol = symbol.trim().to_ascii_uppercase();
        self.entries
            .get(&(symbol.clone(), date))
            .copied()
            .ok_or(IngestError::MissingPrice { symbol, date })
    }

    /// Loads a delimited file with columns `symbol,date,price_usd`
    /// (date `YYYY-MM-DD`, UTC).
    pub fn load(path: impl AsRef<Path>) -> Result<PriceTable, IngestError> {
        let file = open_file(path.as_ref())?;
        PriceTable::from_reader(file)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<PriceTable, IngestError> {
        let mut csv = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = csv.headers().map_err(|e| IngestError::Row {
            line: 1,
            message: e.to_string(),
        })?;
        for required in ["symbol", "date", "price_usd"] {
            if !headers.iter().any(|h| h == required) {
                return Err(IngestError::SchemaMismatch(required.to_string()));
            }
        }
        let symbol_idx = headers.iter().position(|h| h == "symbol").unwrap();
        let date_idx = headers.iter().position(|h| h == "date").unwrap();
        let price_idx = headers.iter().position(|h| h == "price_usd").unwrap();

        let mut table = PriceTable::new();
        for (i, row) in csv.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| IngestError::Row {
                line,
                message: e.to_string(),
            })?;
            let symbol = row.get(symbol_idx).unwrap_or_default();
            let date = row
                .get(date_idx)
                .unwrap_or_default()
                .parse::<NaiveDate>()
                .map_err(|e| IngestError::Row {
                    line,
                    message: format!("bad date: {e}"),
                })?;
            let price = row
                .get(price_idx)
                .unwrap_or_default()
                .parse::<Decimal>()
                .map_err(|e| IngestError::Row {
                    line,
                    message: format!("bad price: {e}"),
                })?;
            table.insert(symbol, date, price)?;
        }
        Ok(table)
    }
}

/// Converts a token amount to USD at the daily price, rounded to six
/// decimal places half-even.
pub fn usd_normalize(
    amount: Decimal,
    symbol: &str,
    date: NaiveDate,
    prices: &PriceTable,
) -> Result<MoneyUsd, IngestError> {
    let price = prices.lookup(symbol, date)?;
    Ok(MoneyUsd::new(amount * price))
}
