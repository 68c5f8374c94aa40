const solc = require('solc');
const fs = require('fs');
const src = fs.readFileSync(process.argv[2], 'utf8');
const steps = process.argv[3];
const input = {language: 'Yul', sources: {'a.yul': {content: src}},
  settings: {optimizer: {enabled: true, details: {yul: true, yulDetails: {optimizerSteps: steps}}},
             outputSelection: {'*': {'*': ['irOptimized'], '': ['ast']}}}};
const out = JSON.parse(solc.compile(JSON.stringify(input)));
if (out.errors && out.errors.length) console.error(JSON.stringify(out.errors));
console.log(out.contracts['a.yul'].object.irOptimized);
