#include "fxcast/backtest.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fxcast/errors.hpp"

namespace fxcast::backtest {

std::vector<TradeRecord> run_backtest(const std::vector<double>& returns,
                                      const std::vector<int>& labels,
                                      const std::vector<int>& preds,
                                      const BacktestConfig& config,
                                      const double* prior_equity,
                                      std::size_t first_index) {
    if (returns.empty() || returns.size() != labels.size() || returns.size() != preds.size()) {
        throw ArgumentError("run_backtest: empty or mismatched inputs");
    }
    std::vector<TradeRecord> ledger;
    ledger.reserve(returns.size());
    double equity = prior_equity ? *prior_equity : config.initial_capital;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (!std::isfinite(returns[i])) {
            throw DataError("run_backtest: non-finite return at index " + std::to_string(i));
        }
        TradeRecord t;
        t.index = first_index + i;
        t.ret = returns[i];
        t.label = labels[i];
        t.pred = preds[i];
        t.won = preds[i] == labels[i];
        t.pnl = (t.won ? 1.0 : -1.0) * std::abs(returns[i]) * config.stake_base;
        equity += t.pnl;
        t.equity = equity;
        ledger.push_back(t);
    }
    return ledger;
}

BacktestSummary summarize(const std::vector<TradeRecord>& ledger, const BacktestConfig& config) {
    if (ledger.empty()) throw ArgumentError("summarize: empty ledger");
    BacktestSummary s;
    s.n_trades = ledger.size();
    double peak = config.initial_capital;
    for (const auto& t : ledger) {
        if (t.won) ++s.n_wins;
        s.net_pnl += t.pnl;
        peak = std::max(peak, t.equity);
        s.max_drawdown = std::max(s.max_drawdown, peak - t.equity);
    }
    s.win_rate = static_cast<double>(s.n_wins) / static_cast<double>(s.n_trades);
    s.final_equity = ledger.back().equity;
    return s;
}

std::string ledger_to_csv(const std::vector<TradeRecord>& ledger) {
    std::ostringstream out;
    out << "index,return,label,pred,won,pnl,equity\n";
    char buf[160];
    for (const auto& t : ledger) {
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%d,%d,%s,%.6f,%.6f\n", t.index, t.ret,
                      t.label, t.pred, t.won ? "True" : "False", t.pnl, t.equity);
        out << buf;
    }
    return out.str();
}

std::string summary_to_json(const BacktestSummary& summary) {
    nlohmann::json j = {{"n_trades", summary.n_trades},
                        {"n_wins", summary.n_wins},
                        {"win_rate", summary.win_rate},
                        {"net_pnl", summary.net_pnl},
                        {"final_equity", summary.final_equity},
                        {"max_drawdown", summary.max_drawdown}};
    return j.dump(2);
}

}  // namespace fxcast::backtest
