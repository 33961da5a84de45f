#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tpem/harness/experiment.hpp"

namespace tpem::harness {

// One JSON object per line: a "run" header, then "final", "matrix",
// "task_log" and "storage" records.
std::string to_records(const RunReport& report);
// Accepts the concatenation of several runs' records.
std::vector<RunReport> from_records(std::string_view text, const std::string& source = "<memory>");

// Rows are runs, columns are tasks (BLEU / entity F1 pairs) plus the average.
std::string render_table(const std::vector<RunReport>& reports);
// CSV with columns run,mode,after_task,task,bleu,entity_f1: how every task's
// scores change as the sequence advances.
std::string render_series(const std::vector<RunReport>& reports);
std::string render_shuffles(const ShuffleReport& report);

// Writes records.jsonl, table.txt and series.csv into `dir`.
void write_report_files(const std::vector<RunReport>& reports, const std::string& dir);
// Reads every records*.jsonl under `dir` (recursively) and rewrites table.txt
// and series.csv next to them. Returns the reports found.
std::vector<RunReport> regenerate_report(const std::string& dir);

}  // namespace tpem::harness
