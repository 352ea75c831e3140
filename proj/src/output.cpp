namespace fewmode {}
