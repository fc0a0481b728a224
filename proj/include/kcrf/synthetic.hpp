#ifndef KCRF_SYNTHETIC_HPP_
#define KCRF_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "kcrf/corpus.hpp"

namespace kcrf {

// Word pools and mixture weights for generated review-like corpora. Every
// sentence comes with a fixed template parse, so no external parser is
// needed.
//
// Complementary entities attach to their verb with "nmod:with"; other things
// in the same slot attach with "obl". The verb always sits outside the +-4
// word window of the slot and the surface context is shared, so only the
// dependency relation (or knowledge about it) tells the two apart.
struct SyntheticConfig {
  std::vector<std::string> products = {"stand", "case", "mount", "holder",
                                       "cover"};
  // Complement verbs seen often in labeled training data.
  std::vector<std::string> train_verbs = {"works", "fits"};
  // Complement verbs seen about once each in training.
  std::vector<std::string> rare_verbs = {
      "pairs",    "connects", "docks",   "syncs",    "goes",    "clips",
      "snaps",    "attaches", "mates",   "plays",    "charges", "links",
      "matches",  "locks",    "latches", "functions", "operates", "performs",
      "couples",  "meshes",   "slots",   "sits",     "rests",   "stays",
      "cooperates", "integrates", "interfaces", "communicates", "jives",
      "mounts"};
  // Complement verbs that only appear in unlabeled and test data.
  std::vector<std::string> expansion_verbs = {"holds", "supports"};
  // Verbs whose slot filler is not a complementary entity: frequent ones and
  // ones seen about once each in training.
  std::vector<std::string> other_verbs = {"comes", "ships", "arrives"};
  std::vector<std::string> rare_other_verbs = {
      "includes", "bundles", "packs", "lacks", "misses", "needs", "wants",
      "loses", "breaks", "requires", "omits", "forgets", "skips", "drops",
      "hides", "stores", "keeps", "sells", "gets", "buys", "returns",
      "replaces", "scratches", "damages", "smells", "costs", "weighs",
      "rattles", "leaks", "squeaks"};
  // Entities seen often in training, always with rare verbs.
  std::vector<std::string> train_entities = {"iPhone", "iPad", "Galaxy"};
  // Entities seen about once each in training, always with training verbs.
  std::vector<std::string> rare_entities = {
      "Kindle",  "Nexus",   "Pixel",   "Surface", "Xperia",  "Lumia",
      "Nook",    "Droid",   "Moto",    "Kobo",    "Fire",    "Tab",
      "Note",    "Yoga",    "Aspire",  "Inspiron", "Pavilion", "Envy",
      "Spectre", "Zenbook", "Vaio",    "Toughbook", "Latitude", "Xps",
      "Ideapad", "Thinkpad", "Chromebook", "Macbook", "Transformer",
      "Eee",     "Slate",   "Playbook", "Galaxytab", "Mediapad", "Memopad",
      "Shield",  "Tegra",   "Venue",   "Stream",  "Miix"};
  // Entities that only occur in the unlabeled corpus.
  std::vector<std::string> unlabeled_entities = {
      "Zune", "Palm", "Blackberry", "Treo", "Optimus", "Razr", "Thrive",
      "Xoom"};
  // Entities first seen at test time.
  std::vector<std::string> test_entities = {
      "Iconia", "Streak", "Vivo", "Aquos", "Desire", "Sensation", "Atrix",
      "Evo"};
  // Non-entity slot fillers: frequent ones (with rare verbs) and rare ones
  // (with frequent verbs).
  std::vector<std::string> objects = {"Charger", "Cable", "Manual"};
  std::vector<std::string> rare_objects = {
      "Box",     "Pouch",   "Adapter", "Sticker", "Screwdriver", "Bag",
      "Battery", "Cord",    "Plug",    "Screw",   "Bolt",    "Pad",
      "Foam",    "Tape",    "Label",   "Card",    "Sleeve",  "Wrap",
      "Clip",    "Hook",    "Ring",    "Base",    "Leg",     "Arm",
      "Hinge",   "Knob",    "Spring",  "Washer",  "Nut",     "Rubber",
      "Felt",    "Velcro",  "Magnet",  "Glue",    "Instructions", "Bracket",
      "Tray",    "Lid",     "Cap",     "Shim"};
  std::vector<std::string> test_objects = {"Warranty", "Lanyard", "Cloth",
                                           "Strap", "Receipt", "Brochure"};

  // Training mixture: complement sentences with frequent verbs, with rare
  // verbs, then non-complement sentences likewise; the rest are fillers.
  double train_pos_frequent_verb = 0.20;
  double train_pos_rare_verb = 0.22;
  double train_neg_frequent_verb = 0.24;
  double train_neg_rare_verb = 0.24;
  std::vector<std::string> adjectives = {"sturdy", "cheap", "great", "solid",
                                         "flimsy"};

  int train_sentences = 200;
  int unlabeled_sentences = 2000;
  int test_sentences = 200;
};

struct SyntheticCorpus {
  std::vector<Sentence> train;
  std::vector<Sentence> unlabeled;  // labels stripped
  std::vector<Sentence> test;
  // Indices into `test` of sentences whose entity is governed by an
  // expansion-only verb.
  std::vector<std::size_t> expansion_test;
};

// Deterministic for a given seed and config.
SyntheticCorpus generate_synthetic(std::uint64_t seed,
                                   const SyntheticConfig &config = {});

}  // namespace kcrf

#endif  // KCRF_SYNTHETIC_HPP_
