const solc = require('solc');
const fs = require('fs');
const src = fs.readFileSync(process.argv[2], 'utf8');
const input = {language: 'Yul', sources: {'a.yul': {content: src}}, settings: {outputSelection: {'*': {'*': ['ast'], '': ['ast']}}}};
const out = JSON.parse(solc.compile(JSON.stringify(input)));
if (out.errors && out.errors.length) console.error(JSON.stringify(out.errors));
console.log(JSON.stringify(out.sources['a.yul'].ast, null, 1));
