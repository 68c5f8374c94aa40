const solc = require('solc');
const fs = require('fs');
const src = fs.readFileSync(process.argv[2], 'utf8');
const input = {language: 'Yul', sources: {'a.yul': {content: src}},
  settings: {optimizer: {enabled: false}, outputSelection: {'*': {'*': ['evm.bytecode.object', 'evm.assembly']}}}};
const out = JSON.parse(solc.compile(JSON.stringify(input)));
if (out.errors && out.errors.length) console.error(JSON.stringify(out.errors));
const c = out.contracts['a.yul'].object;
console.log(c.evm.assembly);
