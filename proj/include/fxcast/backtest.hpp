#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fxcast::backtest {

struct BacktestConfig {
    double initial_capital = 10000.0;
    // Multiplier applied to |return|; the reference ledger's arithmetic
    // implies returns are staked at 10000x their table units.
    double stake_base = 10000.0;
};

struct TradeRecord {
    std::size_t index = 0;
    double ret = 0.0;
    int label = 0;
    int pred = 0;
    bool won = false;
    double pnl = 0.0;
    double equity = 0.0;
};

struct BacktestSummary {
    std::size_t n_trades = 0;
    std::size_t n_wins = 0;
    double win_rate = 0.0;
    double net_pnl = 0.0;
    double final_equity = 0.0;
    double max_drawdown = 0.0;
};

// One trade per step: won = (pred == label), pnl = +-|ret| * stake_base,
// equity folds sequentially from initial_capital (optionally overridden
// by prior_equity for replaying a ledger tail).
std::vector<TradeRecord> run_backtest(const std::vector<double>& returns,
                                      const std::vector<int>& labels,
                                      const std::vector<int>& preds,
                                      const BacktestConfig& config,
                                      const double* prior_equity = nullptr,
                                      std::size_t first_index = 0);

BacktestSummary summarize(const std::vector<TradeRecord>& ledger, const BacktestConfig& config);

// Ledger CSV in the fixed column order
// index,return,label,pred,won,pnl,equity with 6 decimal places.
std::string ledger_to_csv(const std::vector<TradeRecord>& ledger);

std::string summary_to_json(const BacktestSummary& summary);

}  // namespace fxcast::backtest
