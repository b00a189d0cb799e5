#include "olap/queries.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "olap/errors.hpp"
#include "olap/team.hpp"
#include "olap/timer.hpp"

namespace olap {

using tpch::days_from_civil;
using tpch::encode;

QueryParameters QueryParameters::defaults() {
  QueryParameters p;
  p.q3 = {encode(tpch::mktsegment_dictionary(), "BUILDING"), days_from_civil(1995, 3, 15)};
  p.q10 = {days_from_civil(1993, 10, 1), days_from_civil(1994, 1, 1), encode(tpch::returnflag_dictionary(), "R")};
  p.q12 = {{encode(tpch::shipmode_dictionary(), "MAIL"), encode(tpch::shipmode_dictionary(), "SHIP")},
           days_from_civil(1994, 1, 1),
           days_from_civil(1995, 1, 1)};

  const auto& containers = tpch::container_dictionary();
  auto codes = [&](std::initializer_list<const char*> names) {
    std::vector<int32_t> out;
    for (const char* n : names) out.push_back(encode(containers, n));
    return out;
  };
  const auto& brands = tpch::brand_dictionary();
  p.q19.groups = {
      {encode(brands, "Brand#12"), codes({"SM CASE", "SM BOX", "SM PACK", "SM PKG"}), 1, 11, 1, 5},
      {encode(brands, "Brand#23"), codes({"MED BAG", "MED BOX", "MED PKG", "MED PACK"}), 10, 20, 1, 10},
      {encode(brands, "Brand#34"), codes({"LG CASE", "LG BOX", "LG PACK", "LG PKG"}), 20, 30, 1, 15},
  };
  p.q19.shipmodes = {encode(tpch::shipmode_dictionary(), "AIR"), encode(tpch::shipmode_dictionary(), "REG AIR")};
  p.q19.shipinstruct = encode(tpch::shipinstruct_dictionary(), "DELIVER IN PERSON");
  return p;
}

const std::vector<int>& supported_queries() {
  static const std::vector<int> ids{3, 10, 12, 19};
  return ids;
}

namespace {

bool contains(const std::vector<int32_t>& set, int32_t v) { return std::find(set.begin(), set.end(), v) != set.end(); }

bool part_in_group(const tpch::PartTable& part, std::size_t row, const QueryParameters::Q19Group& g) {
  return part.brand[row] == g.brand && contains(g.containers, part.container[row]) && part.size[row] >= g.size_min &&
         part.size[row] <= g.size_max;
}

bool q19_match(const tpch::PartTable& part, std::size_t prow, const tpch::LineitemTable& li, std::size_t lrow,
               const QueryParameters::Q19& q) {
  for (const auto& g : q.groups) {
    if (part_in_group(part, prow, g) && li.quantity[lrow] >= g.quantity_min && li.quantity[lrow] <= g.quantity_max) {
      return true;
    }
  }
  return false;
}

bool q19_lineitem(const tpch::LineitemTable& li, std::size_t row, const QueryParameters::Q19& q) {
  if (!contains(q.shipmodes, li.shipmode[row]) || li.shipinstruct[row] != q.shipinstruct) return false;
  for (const auto& g : q.groups) {
    if (li.quantity[row] >= g.quantity_min && li.quantity[row] <= g.quantity_max) return true;
  }
  return false;
}

bool q12_lineitem(const tpch::LineitemTable& li, std::size_t row, const QueryParameters::Q12& q) {
  return contains(q.shipmodes, li.shipmode[row]) && li.commitdate[row] < li.receiptdate[row] &&
         li.shipdate[row] < li.commitdate[row] && li.receiptdate[row] >= q.receipt_from &&
         li.receiptdate[row] < q.receipt_to;
}

/// Runs operators one at a time and records their timings.
class Executor {
 public:
  explicit Executor(const QueryOptions& opts) : opts_(opts) {}

  /// Filter + project: (key_of(row), row) for every row passing `keep`, in row order.
  Relation select(const std::string& name, std::size_t rows, const std::function<bool(std::size_t)>& keep,
                  const std::vector<int32_t>& key_column) {
    Stopwatch watch;
    const unsigned threads = opts_.threads;
    std::vector<std::vector<Tuple>> parts(threads);
    run_team(threads, [&](unsigned tid) {
      const ChunkRange chunk = chunk_for(rows, tid, threads, 64);
      auto& local = parts[tid];
      for (std::size_t r = chunk.begin; r < chunk.end; ++r) {
        if (keep(r)) local.push_back({static_cast<uint32_t>(key_column[r]), static_cast<uint32_t>(r)});
      }
    });
    Relation out;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.tuples.reserve(total);
    for (const auto& p : parts) out.tuples.insert(out.tuples.end(), p.begin(), p.end());
    record(name, watch.elapsed_ns(), out.cardinality());
    return out;
  }

  /// Equi-join on the tuple keys; `build` must hold unique keys.
  JoinOutput join(const std::string& name, const Relation& build, const Relation& probe) {
    Stopwatch watch;
    JoinOptions jo;
    jo.threads = opts_.threads;
    std::tie(jo.radix_bits_pass1, jo.radix_bits_pass2) = suggested_radix_bits(build.cardinality());
    jo.kernel_variant = opts_.kernel_variant;
    jo.queue_kind = opts_.queue_kind;
    jo.materialize = true;
    JoinResult r = run_join(opts_.join_kind, build, probe, jo);
    JoinOutput out = std::move(*r.output);
    record(name, watch.elapsed_ns(), out.size);
    return out;
  }

  /// Re-keys join rows for the next join: (key_column[payload], payload) where payload is the
  /// probe-side row id.
  Relation rekey_probe_rows(const std::string& name, const JoinOutput& rows, const std::vector<int32_t>& key_column) {
    Stopwatch watch;
    Relation out;
    out.tuples.resize(rows.size);
    const JoinRow* in = rows.storage.data();
    run_team(opts_.threads, [&](unsigned tid) {
      const ChunkRange chunk = chunk_for(rows.size, tid, opts_.threads);
      for (std::size_t i = chunk.begin; i < chunk.end; ++i) {
        out.tuples[i] = {static_cast<uint32_t>(key_column[in[i].right_payload]), in[i].right_payload};
      }
    });
    record(name, watch.elapsed_ns(), out.cardinality());
    return out;
  }

  uint64_t count_rows(const JoinOutput& rows, const std::function<bool(const JoinRow&)>& keep = {}) {
    Stopwatch watch;
    uint64_t n = 0;
    if (!keep) {
      n = rows.size;
    } else {
      for (const JoinRow& r : rows.rows()) n += keep(r) ? 1 : 0;
    }
    record("count", watch.elapsed_ns(), n);
    return n;
  }

  std::vector<OperatorTiming> take_timings() { return std::move(timings_); }

 private:
  void record(const std::string& name, uint64_t ns, uint64_t rows) { timings_.push_back({name, ns, rows}); }

  QueryOptions opts_;
  std::vector<OperatorTiming> timings_;
};

}  // namespace

QueryResult run_query(int query_id, const tpch::TpchLiteDB& db, const QueryOptions& opts,
                      const QueryParameters& params) {
  if (std::find(supported_queries().begin(), supported_queries().end(), query_id) == supported_queries().end()) {
    throw ConfigError("unknown query id: " + std::to_string(query_id));
  }
  if (opts.threads == 0) throw ConfigError("threads must be at least 1");

  const auto& c = db.customer;
  const auto& o = db.orders;
  const auto& l = db.lineitem;
  const auto& p = db.part;

  Executor ex(opts);
  QueryResult result;
  Stopwatch total;

  switch (query_id) {
    case 3: {
      const auto& q = params.q3;
      Relation cust = ex.select("scan_customer", c.rows(), [&](std::size_t r) { return c.mktsegment[r] == q.segment; },
                                c.custkey);
      Relation ord = ex.select("scan_orders", o.rows(), [&](std::size_t r) { return o.orderdate[r] < q.date; },
                               o.custkey);
      JoinOutput co = ex.join("join_customer_orders", cust, ord);
      Relation ord_keyed = ex.rekey_probe_rows("project_orders", co, o.orderkey);
      Relation li = ex.select("scan_lineitem", l.rows(), [&](std::size_t r) { return l.shipdate[r] > q.date; },
                              l.orderkey);
      JoinOutput ol = ex.join("join_orders_lineitem", ord_keyed, li);
      result.count = ex.count_rows(ol);
      break;
    }
    case 10: {
      const auto& q = params.q10;
      Relation ord = ex.select(
          "scan_orders", o.rows(),
          [&](std::size_t r) { return o.orderdate[r] >= q.order_from && o.orderdate[r] < q.order_to; }, o.custkey);
      Relation cust = ex.select("scan_customer", c.rows(), [](std::size_t) { return true; }, c.custkey);
      JoinOutput co = ex.join("join_customer_orders", cust, ord);
      Relation ord_keyed = ex.rekey_probe_rows("project_orders", co, o.orderkey);
      Relation li = ex.select("scan_lineitem", l.rows(), [&](std::size_t r) { return l.returnflag[r] == q.returnflag; },
                              l.orderkey);
      JoinOutput ol = ex.join("join_orders_lineitem", ord_keyed, li);
      result.count = ex.count_rows(ol);
      break;
    }
    case 12: {
      const auto& q = params.q12;
      Relation li = ex.select("scan_lineitem", l.rows(), [&](std::size_t r) { return q12_lineitem(l, r, q); },
                              l.orderkey);
      Relation ord = ex.select("scan_orders", o.rows(), [](std::size_t) { return true; }, o.orderkey);
      JoinOutput ol = ex.join("join_orders_lineitem", ord, li);
      result.count = ex.count_rows(ol);
      break;
    }
    case 19: {
      const auto& q = params.q19;
      Relation parts = ex.select(
          "scan_part", p.rows(),
          [&](std::size_t r) {
            return std::any_of(q.groups.begin(), q.groups.end(), [&](const auto& g) { return part_in_group(p, r, g); });
          },
          p.partkey);
      Relation li = ex.select("scan_lineitem", l.rows(), [&](std::size_t r) { return q19_lineitem(l, r, q); },
                              l.partkey);
      JoinOutput pl = ex.join("join_part_lineitem", parts, li);
      result.count =
          ex.count_rows(pl, [&](const JoinRow& row) { return q19_match(p, row.left_payload, l, row.right_payload, q); });
      break;
    }
  }

  result.total_ns = total.elapsed_ns();
  result.operators = ex.take_timings();
  return result;
}

uint64_t reference_count(int query_id, const tpch::TpchLiteDB& db, const QueryParameters& params) {
  const auto& c = db.customer;
  const auto& o = db.orders;
  const auto& l = db.lineitem;
  const auto& p = db.part;
  uint64_t count = 0;

  switch (query_id) {
    case 3: {
      const auto& q = params.q3;
      for (std::size_t li = 0; li < l.rows(); ++li) {
        if (!(l.shipdate[li] > q.date)) continue;
        for (std::size_t oi = 0; oi < o.rows(); ++oi) {
          if (o.orderkey[oi] != l.orderkey[li] || !(o.orderdate[oi] < q.date)) continue;
          for (std::size_t ci = 0; ci < c.rows(); ++ci) {
            if (c.custkey[ci] == o.custkey[oi] && c.mktsegment[ci] == q.segment) ++count;
          }
        }
      }
      return count;
    }
    case 10: {
      const auto& q = params.q10;
      for (std::size_t li = 0; li < l.rows(); ++li) {
        if (l.returnflag[li] != q.returnflag) continue;
        for (std::size_t oi = 0; oi < o.rows(); ++oi) {
          if (o.orderkey[oi] != l.orderkey[li]) continue;
          if (!(o.orderdate[oi] >= q.order_from && o.orderdate[oi] < q.order_to)) continue;
          for (std::size_t ci = 0; ci < c.rows(); ++ci) {
            if (c.custkey[ci] == o.custkey[oi]) ++count;
          }
        }
      }
      return count;
    }
    case 12: {
      const auto& q = params.q12;
      for (std::size_t li = 0; li < l.rows(); ++li) {
        if (!q12_lineitem(l, li, q)) continue;
        for (std::size_t oi = 0; oi < o.rows(); ++oi) {
          if (o.orderkey[oi] == l.orderkey[li]) ++count;
        }
      }
      return count;
    }
    case 19: {
      const auto& q = params.q19;
      for (std::size_t li = 0; li < l.rows(); ++li) {
        if (!contains(q.shipmodes, l.shipmode[li]) || l.shipinstruct[li] != q.shipinstruct) continue;
        for (std::size_t pi = 0; pi < p.rows(); ++pi) {
          if (p.partkey[pi] == l.partkey[li] && q19_match(p, pi, l, li, q)) ++count;
        }
      }
      return count;
    }
    default:
      throw ConfigError("unknown query id: " + std::to_string(query_id));
  }
}

}  // namespace olap
