#include "crfner/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "crfner/config.hpp"
#include "crfner/corpus.hpp"
#include "crfner/error.hpp"
#include "crfner/eval.hpp"
#include "crfner/inference.hpp"
#include "crfner/model_io.hpp"
#include "crfner/trainer.hpp"

namespace crfner::cli {

namespace {

// Returns an exit code if parsing ended the run (help or a usage error).
std::optional<int> parse_args(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                              std::ostream& err) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return std::nullopt;
}

Corpus tag_corpus(const Model& model, const Corpus& input) {
  std::vector<Sentence> out;
  out.reserve(input.size());
  for (const Sentence& s : input.sentences()) out.push_back(s.with_labels(tag(model, s)));
  return Corpus(std::move(out));
}

}  // namespace

int run_train(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train a CRF model", "crfner train"};
  std::string train_path, config_path, model_out, dev_path;
  std::vector<std::string> gazetteers;
  bool nfc = false, quiet = false;
  app.add_option("--train", train_path, "Labeled 4-column training corpus")->required()->check(CLI::ExistingFile);
  app.add_option("--config", config_path, "key=value run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--model-out", model_out, "Where to write the model")->required();
  app.add_option("--gazetteer", gazetteers, "Gazetteer as name=path (repeatable)");
  app.add_option("--dev", dev_path, "Labeled development corpus to score after training")->check(CLI::ExistingFile);
  app.add_flag("--nfc", nfc, "NFC-normalize corpus text on read");
  app.add_flag("--quiet", quiet, "Do not print per-iteration progress");
  if (auto code = parse_args(app, args, out, err)) return *code;

  RunConfig cfg;
  ResolvedGazetteers resolved;
  try {
    cfg = load_run_config(config_path);
    for (const auto& g : gazetteers) add_gazetteer_source(cfg, g);
    resolved = resolve_gazetteers(cfg);
  } catch (const ConfigError& e) {
    err << "crfner train: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "crfner train: " << e.what() << "\n";
    return kExitFailure;
  }
  for (const auto& name : resolved.dropped)
    err << "crfner train: note: no file for gazetteer slot '" << name << "', feature disabled\n";

  try {
    const ReadOptions read{Columns::labeled, nfc};
    const Corpus corpus = parse_column_file(train_path, read);
    IterationCallback progress;
    if (!quiet)
      progress = [&err](int iter, double value) { err << "iter " << iter << " objective " << value << "\n"; };
    const Model model = train(corpus, cfg.features, resolved.gazetteers, cfg.train, progress);
    save_model(model, model_out);
    out << "labels: " << model.num_labels() << "\n"
        << "features: " << model.features.size() << "\n"
        << "iterations: " << model.metadata.iterations << "\n"
        << "objective: " << model.metadata.final_objective << "\n"
        << "stop: " << to_string(model.metadata.stop_reason) << "\n";

    if (!dev_path.empty()) {
      const Corpus dev = parse_column_file(dev_path, read);
      const Corpus predicted = tag_corpus(model, dev);
      out << format_table(score(dev, predicted));
    }
  } catch (const Error& e) {
    err << "crfner train: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int run_tag(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tag an unlabeled 3-column corpus", "crfner tag"};
  std::string model_path, input_path, output_path;
  bool nfc = false;
  app.add_option("--model", model_path, "Trained model file")->required()->check(CLI::ExistingFile);
  app.add_option("--input", input_path, "Unlabeled 3-column corpus")->required()->check(CLI::ExistingFile);
  app.add_option("--output", output_path, "Where to write the 4-column result")->required();
  app.add_flag("--nfc", nfc, "NFC-normalize corpus text on read");
  if (auto code = parse_args(app, args, out, err)) return *code;

  Model model;
  try {
    model = load_model(model_path);
  } catch (const Error& e) {
    err << "crfner tag: " << e.what() << "\n";
    return kExitFailure;
  }

  Corpus input;
  try {
    input = parse_column_file(input_path, ReadOptions{Columns::unlabeled, nfc});
  } catch (const ParseError& e) {
    err << "crfner tag: " << input_path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "crfner tag: " << e.what() << "\n";
    return kExitFailure;
  }

  try {
    write_column_file(tag_corpus(model, input), output_path);
  } catch (const Error& e) {
    err << "crfner tag: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int run_eval(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Score predicted labels against gold", "crfner eval"};
  std::string gold_path, pred_path, format = "table";
  app.add_option("--gold", gold_path, "Gold 4-column corpus")->required()->check(CLI::ExistingFile);
  app.add_option("--pred", pred_path, "Predicted 4-column corpus")->required()->check(CLI::ExistingFile);
  app.add_option("--format", format, "table, records, or both")
      ->check(CLI::IsMember({"table", "records", "both"}));
  if (auto code = parse_args(app, args, out, err)) return *code;

  try {
    const Corpus gold = parse_column_file(gold_path, true);
    const Corpus pred = parse_column_file(pred_path, true);
    const EvalReport report = score(gold, pred);
    if (format != "records") out << format_table(report);
    if (format != "table") out << format_records(report);
  } catch (const Error& e) {
    err << "crfner eval: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int run_stats(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Print corpus statistics", "crfner stats"};
  std::string input_path;
  bool nfc = false;
  app.add_option("--input", input_path, "3- or 4-column corpus")->required()->check(CLI::ExistingFile);
  app.add_flag("--nfc", nfc, "NFC-normalize corpus text on read");
  if (auto code = parse_args(app, args, out, err)) return *code;

  try {
    const Corpus corpus = parse_column_file(input_path, ReadOptions{Columns::detect, nfc});
    const CorpusStats stats = corpus_stats(corpus);
    out << "sentences: " << stats.sentences << "\n" << "tokens: " << stats.tokens << "\n";
    for (const auto& [label, count] : stats.histogram) out << "label " << label << ": " << count << "\n";
  } catch (const Error& e) {
    err << "crfner stats: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  static constexpr std::string_view kUsage =
      "usage: crfner <command> [options]\n"
      "\n"
      "commands:\n"
      "  train   train a model from a labeled corpus\n"
      "  tag     label an unlabeled corpus with a trained model\n"
      "  eval    entity-level precision/recall/F-measure\n"
      "  stats   sentence, token, and label counts\n"
      "\n"
      "Run `crfner <command> --help` for command options.\n";
  if (argv.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  const std::string& cmd = argv.front();
  const std::vector<std::string> rest(argv.begin() + 1, argv.end());
  if (cmd == "train") return run_train(rest, out, err);
  if (cmd == "tag") return run_tag(rest, out, err);
  if (cmd == "eval") return run_eval(rest, out, err);
  if (cmd == "stats") return run_stats(rest, out, err);
  if (cmd == "-h" || cmd == "--help" || cmd == "help") {
    out << kUsage;
    return kExitOk;
  }
  err << "crfner: unknown command '" << cmd << "'\n" << kUsage;
  return kExitUsage;
}

}  // namespace crfner::cli
