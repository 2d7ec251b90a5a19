pub mod decompose;
pub mod modes;
pub mod qkd;
pub mod snr;
pub mod tradeoff;

use tffilter_core::gaussian::GaussianSif;
use tffilter_core::slepian::RectangularSif;
use tffilter_core::{FilterSpec, StageOrder};

use crate::args::{Family, Order};
use crate::output::CliResult;

pub fn stage_order(order: Order) -> StageOrder {
    match order {
        Order::Ff => StageOrder::FrequencyFirst,
        Order::Tf => StageOrder::TimeFirst,
    }
}

pub fn order_name(order: Order) -> &'static str {
    match order {
        Order::Ff => "ff",
        Order::Tf => "tf",
    }
}

/// Square filter `B = T = √BT` of the family.
pub fn filter_spec(family: Family, bt: f64, order: Order) -> CliResult<FilterSpec> {
    let order = stage_order(order);
    Ok(match family {
        Family::Gaussian => GaussianSif::from_bt(bt)?.filter(order),
        Family::Slepian => RectangularSif::from_bt(bt)?.filter(order),
    })
}
